"""
Тест вложений систем корней в E8 и классификации по кручению фактора
"""

import sys
from pathlib import Path

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent))

import random

import pytest

from src.exceptions import InvalidInputError, NotEmbeddableError
from src.lattice_core import discriminant_group, orthogonal_complement, saturation
from src.root_embeddings import (
    PREDICATES,
    admits_odd_embedding,
    all_embeddings_up_to_isometry,
    candidate_specs,
    cartan_gram,
    classify_by_predicate,
    classify_odd_torsion,
    dihedral_quotient_count,
    e8_roots,
    find_embedding,
    format_spec,
    minimal_euler,
    parse_spec,
    spec_torsion,
    verify_lemma_e8,
    witnesses_isometric,
)

ODD_TORSION_TABLE = {
    ("4A2", (3, 3), 1),
    ("3A2", (3,), 1),
    ("3A2+A1", (3,), 1),
    ("A5+A2", (3,), 1),
    ("A8", (3,), 1),
    ("E6+A2", (3,), 1),
    ("2A4", (5,), 1),
}

NON_EMBEDDABLE = ("A3+2A2", "A4+2A2", "A6+A2")


def test_spec_grammar():
    assert format_spec(parse_spec("A1+A5⊕A2")) == "A5+A2+A1"
    assert format_spec(parse_spec("A2 + E6")) == "E6+A2"
    assert format_spec(parse_spec("A2+A2+A2+A2")) == "4A2"
    assert format_spec(parse_spec("0")) == "0"
    assert parse_spec("2A4").rank == 8
    for bad in ("D3", "A0", "E9", "B2"):
        with pytest.raises(InvalidInputError):
            parse_spec(bad)


def test_cartan_gram():
    assert cartan_gram(parse_spec("A2")).gram == ((-2, 1), (1, -2))
    assert cartan_gram(parse_spec("2A1")).gram == ((-2, 0), (0, -2))


def test_candidate_specs():
    assert [format_spec(s) for s in candidate_specs(2)] == ["A1", "2A1", "A2"]
    assert all(s.rank <= 8 for s in candidate_specs(8))


def test_e8_roots():
    roots = e8_roots()
    assert len(roots) == 240
    assert len(set(roots)) == 240


def test_non_embeddable():
    for text in NON_EMBEDDABLE:
        assert find_embedding(parse_spec(text)) is None, text
        with pytest.raises(NotEmbeddableError):
            spec_torsion(parse_spec(text))
    assert find_embedding(parse_spec("9A1")) is None


def test_witnesses():
    for text, factors, _ in ODD_TORSION_TABLE:
        witness = find_embedding(parse_spec(text))
        assert witness is not None, text
        assert witness.is_valid(), text
        assert witness.torsion().invariant_factors == factors, text
        assert witnesses_isometric(witness, witness)
    witness = find_embedding(parse_spec("8A1"))
    assert witness is not None and witness.is_valid()
    assert witness.to_json()["spec"] == "8A1"


def test_odd_torsion_classification():
    rows = classify_odd_torsion()
    table = {(format_spec(r.spec), r.torsion.invariant_factors, r.classes_up_to_isometry) for r in rows}
    assert table == ODD_TORSION_TABLE


def test_two_and_three_torsion():
    rows = classify_by_predicate(PREDICATES["2-and-3-torsion"])
    assert [format_spec(r.spec) for r in rows] == ["A5+A2+A1"]


def test_dihedral_counts():
    assert dihedral_quotient_count(parse_spec("4A2"), 3) == 4
    for text in ("3A2", "A5+A2", "A8", "E6+A2"):
        assert dihedral_quotient_count(parse_spec(text), 3) == 1, text
    assert dihedral_quotient_count(parse_spec("2A4"), 5) == 1
    assert dihedral_quotient_count(parse_spec("2A4"), 3) == 0
    with pytest.raises(InvalidInputError):
        dihedral_quotient_count(parse_spec("A2"), 4)


def test_odd_embeddings_and_euler():
    assert admits_odd_embedding(parse_spec("4A2"))
    assert not admits_odd_embedding(parse_spec("8A1"))
    assert minimal_euler(parse_spec("4A2")) == 12
    assert minimal_euler(parse_spec("A1")) == 2
    assert minimal_euler(parse_spec("D4+E6")) == 14


def test_lemma_certificate():
    report = verify_lemma_e8()
    assert report["certified"]
    assert report["complement_rank"] == 8
    assert report["complement_root_count"] == 240
    assert report["complement_discriminant"] == []
    assert report["ambient_signature"] == [1, 9, 0]


def test_root_set_structure():
    roots = e8_roots()
    root_set = set(roots)
    assert all(tuple(-v for v in r) in root_set for r in roots)
    assert all(sum(v * v for v in r) == 8 for r in roots)
    rng = random.Random(5)
    for _ in range(400):
        a, b = rng.choice(roots), rng.choice(roots)
        doubled = sum(x * y for x, y in zip(a, b))
        assert doubled % 4 == 0
        assert -2 <= doubled // 4 <= 2
        assert (doubled // 4 == 2) == (a == b)


def test_class_counts():
    for text in ("2A4", "4A2", "0"):
        assert len(all_embeddings_up_to_isometry(parse_spec(text))) == 1, text


def test_discriminant_duality():
    for text in ("A1", "A2", "A4", "D4", "E6", "A2+A1", "2A2"):
        embedding = find_embedding(parse_spec(text)).embedding()
        saturated = saturation(embedding)
        complement = orthogonal_complement(embedding)
        assert complement.rank == 8 - embedding.rank, text
        assert discriminant_group(saturated.induced()) == discriminant_group(complement.induced()), text
    e6 = orthogonal_complement(find_embedding(parse_spec("A2")).embedding())
    assert discriminant_group(e6.induced()).invariant_factors == (3,)


def main():
    """Запуск всех проверок с выводом результата"""
    print("\n" + "="*70)
    print("ТЕСТ ВЛОЖЕНИЙ В E8")
    print("="*70 + "\n")

    tests = [
        ("Грамматика систем корней", test_spec_grammar),
        ("Матрицы Картана", test_cartan_gram),
        ("Кандидаты ранга <= 8", test_candidate_specs),
        ("240 корней E8", test_e8_roots),
        ("Невложимые системы", test_non_embeddable),
        ("Свидетели вложений", test_witnesses),
        ("Нечетное кручение (полный перебор)", test_odd_torsion_classification),
        ("2- и 3-кручение одновременно", test_two_and_three_torsion),
        ("Диэдральные факторы", test_dihedral_counts),
        ("Нечетные вложения и эйлерова характеристика", test_odd_embeddings_and_euler),
        ("Решетка (1, 9)", test_lemma_certificate),
        ("Корни E8: симметрия и произведения", test_root_set_structure),
        ("Число классов вложений", test_class_counts),
        ("Дискриминанты подрешетки и дополнения", test_discriminant_duality),
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
