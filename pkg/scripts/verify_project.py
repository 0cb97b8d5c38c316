"""
Скрипт для проверки структуры проекта, конфигурации и быстрых инвариантов
"""

import os
import sys
from pathlib import Path

import yaml

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent.parent))


def check_project():
    """Проверка файлов, конфигурации и нескольких быстрых вычислений"""
    print("="*70)
    print("ПРОВЕРКА ПРОЕКТА SEXTIC TOOLKIT")
    print("="*70)
    print()

    errors = []
    warnings = []

    root = Path(__file__).parent.parent
    os.chdir(root)

    print(f"📂 Корень проекта: {root}")
    print()

    print("1. КРИТИЧНЫЕ ФАЙЛЫ")
    print("-" * 70)
    required_files = [
        "main.py",
        "requirements.txt",
        "README.md",
        "config/toolkit_config.example.yaml",
        "src/__init__.py",
        "src/exceptions.py",
        "src/algebra.py",
        "src/lattice_core.py",
        "src/root_embeddings.py",
        "src/trigonal_geometry.py",
        "src/torus_detector.py",
        "src/fp_groups.py",
        "src/reports.py",
        "src/cli.py",
    ]

    for file_path in required_files:
        full_path = root / file_path
        if full_path.exists():
            size = full_path.stat().st_size
            print(f"✅ {file_path} ({size} bytes)")
        else:
            print(f"❌ {file_path} - НЕ НАЙДЕН!")
            errors.append(f"Отсутствует файл: {file_path}")

    print()

    print("2. КОНФИГУРАЦИЯ")
    print("-" * 70)
    user_config = root / "config" / "toolkit_config.yaml"
    if user_config.exists():
        try:
            with open(user_config, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
            print(f"✅ config/toolkit_config.yaml: секции {', '.join(sorted(loaded))}")
        except yaml.YAMLError as e:
            print(f"❌ Ошибка чтения config/toolkit_config.yaml: {e}")
            errors.append(f"Ошибка чтения конфигурации: {e}")
    else:
        print("⚠️  config/toolkit_config.yaml не найден (используется пример)")
        warnings.append("Скопируйте config/toolkit_config.example.yaml в config/toolkit_config.yaml")

    try:
        from src.cli import load_config
        config = load_config()
        print(f"✅ Бюджет перебора: {config['search']['node_budget']} узлов")
        print(f"✅ Граница порядка групп: {config['groups']['hom_order_bound']}")
    except Exception as e:
        print(f"❌ Конфигурация не загружается: {e}")
        errors.append(f"Конфигурация: {e}")

    print()

    print("3. БЫСТРЫЕ ИНВАРИАНТЫ")
    print("-" * 70)
    try:
        from src.fp_groups import abelianization, monodromy, product_word, reduced_braid_presentation
        from src.lattice_core import discriminant_group
        from src.root_embeddings import cartan_gram, parse_spec
        from src.trigonal_geometry import check_merge_identities

        checks = {
            "disc(E6) = Z/3": str(discriminant_group(cartan_gram(parse_spec("E6")))) == "Z/3",
            "монодромии сохраняют Π": all(
                monodromy(t)(product_word(3)) == product_word(3) for t in ("II", "III", "IV")
            ),
            "B3/Δ^2 -> Z/6": abelianization(reduced_braid_presentation())[1].invariant_factors == (6,),
            "тождества слияния слоев": all(check_merge_identities().values()),
        }
        for name, ok in checks.items():
            print(f"{'✅' if ok else '❌'} {name}")
            if not ok:
                errors.append(f"Не выполнено: {name}")
    except Exception as e:
        print(f"❌ Ошибка вычислений: {e}")
        errors.append(f"Ошибка вычислений: {e}")

    print()

    print("="*70)
    print("ИТОГИ ПРОВЕРКИ")
    print("="*70)

    if not errors and not warnings:
        print("✅ Проект полностью настроен и готов к работе!")
    else:
        if errors:
            print(f"\n❌ Найдено ошибок: {len(errors)}")
            for i, error in enumerate(errors, 1):
                print(f"   {i}. {error}")

        if warnings:
            print(f"\n⚠️  Найдено предупреждений: {len(warnings)}")
            for i, warning in enumerate(warnings, 1):
                print(f"   {i}. {warning}")

    print()
    return len(errors) == 0


if __name__ == "__main__":
    success = check_project()
    sys.exit(0 if success else 1)
