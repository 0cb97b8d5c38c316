"""
Тест загрузки конфигурации
"""

import os
import sys
import tempfile
from pathlib import Path

import yaml

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from src.cli import DEFAULT_CONFIG, ENV_OVERRIDES, load_config
from src.exceptions import ToolkitError

EXAMPLE = Path(__file__).parent / "config" / "toolkit_config.example.yaml"


def _write(directory: str, content) -> str:
    path = Path(directory) / "toolkit.yaml"
    with open(path, "w", encoding="utf-8") as f:
        if isinstance(content, str):
            f.write(content)
        else:
            yaml.safe_dump(content, f, allow_unicode=True)
    return str(path)


def test_example_matches_defaults():
    with open(EXAMPLE, "r", encoding="utf-8") as f:
        example = yaml.safe_load(f)
    assert set(example) == set(DEFAULT_CONFIG)
    for section, values in DEFAULT_CONFIG.items():
        assert set(example[section]) == set(values), section
    assert example["search"]["node_budget"] == DEFAULT_CONFIG["search"]["node_budget"]


def test_default_sections():
    config = load_config()
    for section in ("search", "groups", "output", "logging"):
        assert section in config, section
    assert config["groups"]["hom_order_bound"] >= 1


def test_missing_explicit_file():
    with pytest.raises(FileNotFoundError):
        load_config("config/does_not_exist.yaml")


def test_partial_file_merges_over_defaults():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(tmp, {"search": {"node_budget": 1000}, "output": {"format": "pretty"}})
        config = load_config(path)
    assert config["search"]["node_budget"] == 1000
    assert config["search"]["isometry_budget"] == DEFAULT_CONFIG["search"]["isometry_budget"]
    assert config["output"]["format"] == "pretty"
    assert config["groups"] == DEFAULT_CONFIG["groups"]


def test_invalid_file():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(tmp, "- just\n- a list\n")
        with pytest.raises(ToolkitError):
            load_config(path)


def test_environment_overrides():
    saved = {name: os.environ.get(name) for name in ENV_OVERRIDES}
    try:
        os.environ["SEXTIC_NODE_BUDGET"] = "777"
        os.environ["SEXTIC_LOG_LEVEL"] = "DEBUG"
        config = load_config()
        assert config["search"]["node_budget"] == 777
        assert config["logging"]["level"] == "DEBUG"
        os.environ["SEXTIC_HOM_ORDER_BOUND"] = "many"
        with pytest.raises(ToolkitError):
            load_config()
    finally:
        for name, value in saved.items():
            if value is None:
                os.environ.pop(name, None)
            else:
                os.environ[name] = value


def test_defaults_not_mutated():
    with tempfile.TemporaryDirectory() as tmp:
        load_config(_write(tmp, {"search": {"node_budget": 5}}))
    assert DEFAULT_CONFIG["search"]["node_budget"] == 200_000


def main():
    """Запуск всех проверок с выводом результата"""
    print("\n" + "="*70)
    print("ТЕСТ ЗАГРУЗКИ КОНФИГУРАЦИИ")
    print("="*70 + "\n")

    tests = [
        ("Пример совпадает со значениями по умолчанию", test_example_matches_defaults),
        ("Секции конфигурации", test_default_sections),
        ("Отсутствующий файл", test_missing_explicit_file),
        ("Частичный файл", test_partial_file_merges_over_defaults),
        ("Некорректный файл", test_invalid_file),
        ("Переменные окружения", test_environment_overrides),
        ("Значения по умолчанию не меняются", test_defaults_not_mutated),
    ]

    failed = 0
    for i, (title, test) in enumerate(tests, 1):
        print(f"[{i}] {title}")
        print("-"*70)
        try:
            test()
            print("   ✅ OK\n")
        except Exception as e:
            failed += 1
            print(f"   ❌ {type(e).__name__}: {e}\n")

    print("="*70)
    print(f"{'✅ Все проверки пройдены' if not failed else f'❌ Не пройдено: {failed}'}")
    print("="*70 + "\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
