"""
Тест командной строки: формат ответа, коды выхода, основные команды
"""

import copy
import json
import sys
from pathlib import Path

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent))

from src.cli import DEFAULT_CONFIG, CommandResult, run

THREE_CUSPS = "y^3 + (x^3 + 1)^2"


def _run(*argv):
    return run(list(argv), copy.deepcopy(DEFAULT_CONFIG))


def test_envelope():
    result = _run("torus", "expected", "4A2")
    data = json.loads(result.render())
    assert set(data) == {"status", "payload", "diagnostics"}
    assert data["status"] == "ok"
    assert data["payload"] == {"spec": "4A2", "count": 4}
    assert result.exit_code == 0
    assert result.render() == json.dumps(data, sort_keys=True, ensure_ascii=False)


def test_usage_errors():
    assert _run("lattice", "bogus").exit_code == 2
    result = _run("trigonal", "cubic", "--curve", "y^3 + x^2*y + x^3")
    assert result.exit_code == 2
    assert result.payload["reason"] == "usage"
    assert _run("lattice", "classify-pred", "prime").exit_code == 2


def test_domain_error():
    result = _run("trigonal", "sextic", "--curve", "y^3 + x^4*y", "--fiber", "0")
    assert result.exit_code == 1
    assert result.status == "error"
    assert result.payload["reason"] == "non_minimal_fiber"
    result = _run("trigonal", "fibers", "--curve", "y^2 + x")
    assert (result.exit_code, result.payload["reason"]) == (2, "invalid_input")


def test_malformed_matrix():
    for text in ("[[1.5, 0], [0, 2]]", "[[1, 2], [3]]", "[[1, true], [0, 1]]", "[[\"x\", 0]]", "[1, 2]"):
        result = _run("lattice", "snf", text)
        assert result.status == "error", text
        assert (result.exit_code, result.payload["reason"]) == (2, "invalid_input"), text
    result = _run("lattice", "snf", "[[\"2\", \"-4\"], [\"6\", \"8\"]]")
    assert result.exit_code == 0
    assert result.payload["diagonal"] == [2, 20]
    result = _run("lattice", "discr", "[[2, 1], [1]]")
    assert (result.exit_code, result.payload["reason"]) == (2, "invalid_input")


def test_exit_code_mapping():
    cases = [
        (("lattice", "discr", "E8"), 0, None),
        (("lattice", "discr", "[[0]]"), 1, "degenerate_lattice"),
        (("trigonal", "sextic", "--curve", "y^3 + x^4*y", "--fiber", "0"), 1, "non_minimal_fiber"),
        (("lattice", "snf", "[[1.5, 0], [0, 2]]"), 2, "invalid_input"),
        (("lattice", "snf", "[[1, 2]"), 2, "usage"),
        (("lattice", "bogus"), 2, "usage"),
    ]
    for argv, code, reason in cases:
        result = _run(*argv)
        assert result.exit_code == code, argv
        if reason is not None:
            assert result.payload["reason"] == reason, argv


def test_lattice_commands():
    result = _run("lattice", "embed", "A6+A2")
    assert result.payload == {"spec": "A6+A2", "embeds": False}
    result = _run("lattice", "embed", "--spec", "2A4")
    assert result.payload["embeds"]
    assert result.payload["torsion"] == {"factors": [5]}
    result = _run("lattice", "snf", "[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]")
    assert result.payload["diagonal"] == [2, 6, 12]
    result = _run("lattice", "discr", "E6")
    assert result.payload["text"] == "Z/3"
    result = _run("lattice", "dihedral-count", "4A2", "3")
    assert result.payload["count"] == 4


def test_trigonal_commands():
    result = _run("trigonal", "fibers", "--curve", THREE_CUSPS)
    assert result.payload["euler_total"] == 12
    assert result.payload["sigma_B"] == "3A2"
    assert result.diagnostics == []
    assert _run("trigonal", "genus", THREE_CUSPS).payload == {"genus": 1}
    result = _run("trigonal", "sextic", "--curve", "y^3 + x^4*y", "--fiber", "0", "--degenerate")
    assert result.payload["family"] == "J4,0"
    result = _run("trigonal", "intersect", "y^2 - x^3", "y^2 + x^3")
    assert result.payload == {"index": 6, "resultant_valuation": 6}


def test_torus_commands():
    result = _run("torus", "detect", "--curve", THREE_CUSPS)
    assert result.payload["count"] == 1
    structure = json.dumps(result.payload["structures"][0])
    result = _run("torus", "verify", "--curve", THREE_CUSPS, "--structure", structure)
    assert result.payload == {"holds": True}
    result = _run("torus", "inner-outer", "--curve", THREE_CUSPS, "--structure", structure)
    assert (result.payload["inner"], result.payload["outer"]) == (3, 0)


def test_group_commands():
    result = _run("group", "abelianize", "local:IV")
    assert result.payload["text"] == "Z"
    result = _run("group", "abelianize", "reduced-braid")
    assert (result.payload["free_rank"], result.payload["text"]) == (0, "Z/6")
    result = _run("group", "homs", "braid", "--group", "S3")
    assert result.payload["count"] == 12 and result.payload["epimorphism"]
    result = _run("group", "monodromy", "Ã1*")
    assert result.payload["fixes_product"]
    result = _run("group", "alexander", "<a, b | aba = bab>")
    assert result.payload["coeffs"] == [1, -1, 1]
    result = _run("group", "iso", "D6", "S3")
    assert result.payload["isomorphic"]


def test_pretty_rendering():
    result = _run("trigonal", "fibers", "--curve", THREE_CUSPS, "--pretty")
    text = result.render()
    assert not text.lstrip().startswith("{")
    assert "kodaira" in text
    error = CommandResult.error("invalid_input", "сообщение")
    assert json.loads(error.render(pretty=True))["payload"]["reason"] == "invalid_input"


def main():
    """Запуск всех проверок с выводом результата"""
    print("\n" + "="*70)
    print("ТЕСТ КОМАНДНОЙ СТРОКИ")
    print("="*70 + "\n")

    tests = [
        ("Конверт ответа", test_envelope),
        ("Ошибки использования (код 2)", test_usage_errors),
        ("Ошибки предметной области (код 1)", test_domain_error),
        ("Некорректные матрицы (код 2)", test_malformed_matrix),
        ("Коды выхода 0, 1, 2", test_exit_code_mapping),
        ("Команды lattice", test_lattice_commands),
        ("Команды trigonal", test_trigonal_commands),
        ("Команды torus", test_torus_commands),
        ("Команды group", test_group_commands),
        ("Табличный вывод", test_pretty_rendering),
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
