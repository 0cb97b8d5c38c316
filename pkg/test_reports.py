"""
Тест сводных таблиц: таблица слоев, запреты J2,i и E12, слияние слоев
"""

import sys
from pathlib import Path

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent))

from src.reports import (
    NON_EMBEDDABLE_SPECS,
    merge_remark,
    merge_verdict,
    no_e12_verdicts,
    no_j10_verdicts,
    special_fiber_forces_abelian,
    table1,
    to_dataframe,
)
from src.root_embeddings import parse_spec


def test_table1_rows():
    rows = {row["fiber"]: row for row in table1()}
    assert rows["Ã2*"]["point_O"] == "E14"
    assert rows["Ã2*"]["euler"] == 4
    assert rows["Ã0"]["point_O"] == "J2,0"
    assert rows["Ã0*"]["point_O"] == "J2,1"
    assert rows["Ã0**"]["point_O"] == "E12"
    assert rows["Ẽ8"]["point_O"] == "E20"
    assert rows["Ẽ8"]["euler"] == 10
    assert "Ã_p (p>=1)" in rows and "D̃_q (q>=4)" in rows


def test_no_j10():
    rows = no_j10_verdicts()
    assert all(row["prohibited"] for row in rows)
    assert len(rows) == 2 * len(NON_EMBEDDABLE_SPECS) + 1
    last = rows[-1]
    assert last["sextic"] == "J2,1+4A2"
    assert last["euler_needed"] == 13
    assert last["reason"] == "fiber_budget"
    assert {row["reason"] for row in rows[:-1]} == {"not_embeddable"}


def test_no_e12():
    rows = {row["sigma_B"]: row for row in no_e12_verdicts()}
    two_a4 = rows["2A4"]
    assert two_a4["prohibited"]
    assert two_a4["torsion"] == [5]
    assert two_a4["dihedral_quotients"] == ["D10"]
    assert rows["A8"]["dihedral_quotients"] == ["D6"]
    assert rows["E6+A2"]["reason"] == "dihedral_vs_abelian"
    for text in NON_EMBEDDABLE_SPECS:
        assert rows[text]["reason"] == "not_embeddable"
        assert rows[text]["prohibited"]
        assert rows[text]["torsion"] is None


def test_merge_remark():
    remark = merge_remark()
    assert remark["identities"] == {"II=I1+I1": True, "III=I2+I1": True}
    entries = {entry["sigma_B"]: entry for entry in remark["no_merge"]}
    free = {text: entry["free_I1_fibers"] for text, entry in entries.items()}
    assert free == {"3A2": 3, "A5+A2": 3, "A8": 3, "2A4": 2, "3A2+A1": 1}
    assert not any(entry["merges"] for entry in entries.values())
    assert {entry["reason"] for entry in entries.values()} == {"dihedral_vs_abelian"}
    assert all(entry["abelian_forced"] for entry in entries.values())
    node_case = entries["3A2+A1"]
    assert (node_case["merge"], node_case["point_O"]) == ("I2+I1=III", "E13")
    assert node_case["dihedral_quotients"] == ["D6"]
    assert entries["2A4"]["merge"] == "I1+I1=II"
    assert entries["2A4"]["dihedral_quotients"] == ["D10"]


def test_merge_verdict_derivation():
    assert merge_verdict(parse_spec("A1"), "II")["merges"]
    assert merge_verdict(parse_spec("A1"), "III")["merges"]
    full = merge_verdict(parse_spec("4A2"), "II")
    assert (full["free_I1_fibers"], full["reason"], full["merges"]) == (0, "fiber_budget", False)
    no_node = merge_verdict(parse_spec("3A2"), "III")
    assert (no_node["reason"], no_node["merges"]) == ("fiber_budget", False)


def test_special_fiber_groups():
    assert special_fiber_forces_abelian("II", ("D6", "D10"))
    assert special_fiber_forces_abelian("III", ("D6",))
    assert not special_fiber_forces_abelian("IV", ("D6",))


def test_dataframe():
    frame = to_dataframe(no_e12_verdicts())
    assert len(frame) == 7 + len(NON_EMBEDDABLE_SPECS)
    assert "sextic" in frame.columns
    row = frame[frame["sigma_B"] == "2A4"].iloc[0]
    assert row["dihedral_quotients"] == "D10"
    assert row["torsion"] == "5"


def main():
    """Запуск всех проверок с выводом результата"""
    print("\n" + "="*70)
    print("ТЕСТ СВОДНЫХ ТАБЛИЦ")
    print("="*70 + "\n")

    tests = [
        ("Таблица слой -> точка O", test_table1_rows),
        ("Запреты J2,0 и J2,1", test_no_j10),
        ("Запреты E12", test_no_e12),
        ("Слияние слоев", test_merge_remark),
        ("Слияние: бюджет и препятствие", test_merge_verdict_derivation),
        ("Локальные группы слоев II, III, IV", test_special_fiber_groups),
        ("DataFrame", test_dataframe),
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
