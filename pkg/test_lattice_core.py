"""
Тест целочисленных решеток: форма Смита, дискриминанты, дополнения
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

from src.exceptions import DegenerateLatticeError, InvalidInputError
from src.lattice_core import (
    GramLattice,
    SublatticeEmbedding,
    TorsionGroup,
    determinant,
    direct_sum,
    discriminant_group,
    from_domain_matrix,
    integer_kernel,
    integer_matrix,
    is_characteristic,
    is_definite,
    is_even,
    is_primitive,
    is_unimodular,
    matrix_rank,
    orthogonal_complement,
    quotient_torsion,
    saturation,
    short_vectors,
    signature,
    smith_invariants,
    smith_normal_form,
    to_domain_matrix,
)
from src.root_embeddings import cartan_gram, e8_lattice, parse_spec


def test_smith_normal_form():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    snf = smith_normal_form(M)
    assert snf.diagonal == (2, 6, 12)
    assert _product(snf.U, M, snf.V) == snf.D
    assert abs(determinant(snf.U)) == 1
    assert abs(determinant(snf.V)) == 1


def test_smith_rectangular_and_empty():
    snf = smith_normal_form([[1, 1, 1], [1, 1, 1]])
    assert snf.diagonal == (1, 0)
    assert snf.rank == 1
    assert smith_normal_form([], ncols=3).rank == 0


def test_determinant():
    assert determinant([[2, -1], [-1, 2]]) == 3
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant(e8_lattice().gram) == 1


def test_discriminant_groups():
    cases = {"A1": (2,), "A2": (3,), "A4": (5,), "D4": (2, 2), "E6": (3,), "E7": (2,), "E8": ()}
    for text, factors in cases.items():
        assert discriminant_group(cartan_gram(parse_spec(text))).invariant_factors == factors, text
    assert discriminant_group(cartan_gram(parse_spec("2A2"))).invariant_factors == (3, 3)


def test_degenerate_lattice():
    with pytest.raises(DegenerateLatticeError):
        discriminant_group(GramLattice(((0,),)))


def test_gram_validation():
    with pytest.raises(InvalidInputError):
        GramLattice(((1, 2), (3, 1)))
    with pytest.raises(InvalidInputError):
        GramLattice.from_json({"rank": 3, "gram": [[1, 0], [0, 1]]})
    L = GramLattice.from_json({"gram": [[2, 1], [1, 2]]})
    assert L.to_json() == {"rank": 2, "gram": [[2, 1], [1, 2]]}


def test_torsion_group():
    assert str(TorsionGroup((3, 3))) == "(Z/3)^2"
    assert str(TorsionGroup((2, 6))) == "Z/2 x Z/6"
    assert str(TorsionGroup()) == "0"
    t = TorsionGroup((3, 3))
    assert t.order == 9
    assert t.rank_at(3) == 2
    assert not t.has_torsion(2)
    assert TorsionGroup.from_json(t.to_json()) == t
    with pytest.raises(InvalidInputError):
        TorsionGroup((2, 3))
    with pytest.raises(InvalidInputError):
        TorsionGroup((1,))


def test_kernel_and_complement():
    kernel = integer_kernel([[1, 1]])
    assert len(kernel) == 1
    assert kernel[0][0] + kernel[0][1] == 0 and kernel[0][0] != 0
    plane = GramLattice.diagonal((1, 1))
    complement = orthogonal_complement(SublatticeEmbedding(plane, ((1, 1),)))
    assert complement.rank == 1
    assert complement.induced().gram == ((2,),)


def test_saturation_and_primitivity():
    plane = GramLattice.diagonal((1, 1))
    doubled = SublatticeEmbedding(plane, ((2, 2),))
    assert not is_primitive(doubled)
    assert quotient_torsion(doubled).invariant_factors == (2,)
    saturated = saturation(doubled)
    assert is_primitive(saturated)
    assert saturated.induced().gram == ((2,),)


def test_signature_and_predicates():
    odd = GramLattice.diagonal((1,) + (-1,) * 9)
    assert signature(odd) == (1, 9, 0)
    assert signature(GramLattice(((0, 1), (1, 0)))) == (1, 1, 0)
    assert is_unimodular(odd) and not is_even(odd) and not is_definite(odd)
    assert is_characteristic(odd, (3, 1, 1, 1, 1, 1, 1, 1, 1, 1))
    assert not is_characteristic(odd, (2, 1, 1, 1, 1, 1, 1, 1, 1, 1))
    E8 = e8_lattice()
    assert is_even(E8) and is_unimodular(E8) and is_definite(E8)
    assert signature(E8) == (0, 8, 0)


def test_short_vectors():
    assert len(short_vectors(e8_lattice(), 2)) == 240
    assert len(short_vectors(cartan_gram(parse_spec("A2")), 2)) == 6
    assert len(short_vectors(direct_sum(cartan_gram(parse_spec("A1")), cartan_gram(parse_spec("A1"))), 2)) == 4
    with pytest.raises(InvalidInputError):
        short_vectors(GramLattice(((0, 1), (1, 0))), 2)


def _random_unimodular(rng, n, steps=12):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        move = rng.random()
        if move < 0.2:
            rows[i], rows[j] = rows[j], rows[i]
        elif move < 0.3:
            rows[i] = [-v for v in rows[i]]
        else:
            c = rng.choice((-2, -1, 1, 2))
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return rows


def _product(*matrices):
    result = to_domain_matrix(matrices[0])
    for M in matrices[1:]:
        result = result * to_domain_matrix(M)
    return from_domain_matrix(result)


def _same_lattice(a, b):
    n = a.ambient.rank
    return (a.rank == b.rank and is_primitive(a) and is_primitive(b)
            and matrix_rank(a.columns + b.columns, n) == a.rank)


def test_smith_random_matrices():
    rng = random.Random(20240611)
    for _ in range(25):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        M = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        snf = smith_normal_form(M)
        assert _product(snf.U, M, snf.V) == snf.D
        assert all(snf.D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
        assert all(d >= 0 for d in snf.diagonal)
        assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
        assert snf.rank == matrix_rank(M)
        for vector in integer_kernel(M):
            assert all(sum(row[j] * vector[j] for j in range(n)) == 0 for row in M)
        assert len(integer_kernel(M)) == n - snf.rank


def test_smith_invariants_under_unimodular_change():
    rng = random.Random(7)
    for _ in range(25):
        m, n = rng.randint(2, 4), rng.randint(2, 4)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        invariants = smith_invariants(M)
        for a, b in zip(invariants, invariants[1:]):
            assert b % a == 0
        changed = _product(_random_unimodular(rng, m), M, _random_unimodular(rng, n))
        assert smith_invariants(changed) == invariants
        rows = list(M)
        rng.shuffle(rows)
        assert smith_invariants(rows) == invariants
        assert determinant(_random_unimodular(rng, n)) in (1, -1)


def test_quotient_torsion_under_basis_change():
    rng = random.Random(11)
    ambient = GramLattice.diagonal((1, 1, 1, 1))
    checked = 0
    while checked < 15:
        k = rng.randint(1, 3)
        columns = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(k)]
        if matrix_rank(columns) < k:
            continue
        e = SublatticeEmbedding(ambient, columns)
        changed = e.with_basis_change(_random_unimodular(rng, k) if k > 1 else [[-1]])
        assert quotient_torsion(changed) == quotient_torsion(e)
        assert determinant(changed.induced().gram) == determinant(e.induced().gram)
        checked += 1


def test_saturation_complement_and_index():
    rng = random.Random(3)
    E8 = e8_lattice()
    checked = 0
    while checked < 12:
        k = rng.randint(1, 3)
        columns = [[rng.randint(-2, 2) for _ in range(8)] for _ in range(k)]
        if matrix_rank(columns) < k:
            continue
        e = SublatticeEmbedding(E8, columns)
        saturated = saturation(e)
        complement = orthogonal_complement(e)
        index = quotient_torsion(e).order
        assert determinant(e.induced().gram) == determinant(saturated.induced().gram) * index ** 2
        assert _same_lattice(orthogonal_complement(complement), saturated)
        assert complement.rank == 8 - k
        assert discriminant_group(saturated.induced()) == discriminant_group(complement.induced())
        checked += 1


def test_integer_matrix_validation():
    assert integer_matrix([["12", " -3"], [0, 1]]) == ((12, -3), (0, 1))
    assert integer_matrix([], ncols=2) == ()
    bad = ([[1.5, 0], [0, 2]], [[1, 2], [3]], [[True, 0]], [["1/2"]], [[None]], "[[1]]", [1, 2])
    for M in bad:
        with pytest.raises(InvalidInputError):
            integer_matrix(M)
    with pytest.raises(InvalidInputError):
        smith_normal_form([[1, 2], [3]])
    with pytest.raises(InvalidInputError):
        GramLattice(((1.5,),))
    with pytest.raises(InvalidInputError):
        GramLattice(((1, 0),))
    with pytest.raises(InvalidInputError):
        determinant([[1, 2, 3]])
    with pytest.raises(InvalidInputError):
        TorsionGroup((2.0,))


def main():
    """Запуск всех проверок с выводом результата"""
    print("\n" + "="*70)
    print("ТЕСТ ЦЕЛОЧИСЛЕННЫХ РЕШЕТОК")
    print("="*70 + "\n")

    tests = [
        ("Форма Смита", test_smith_normal_form),
        ("Форма Смита: прямоугольные и пустые", test_smith_rectangular_and_empty),
        ("Определитель", test_determinant),
        ("Группы дискриминанта ADE", test_discriminant_groups),
        ("Вырожденная решетка", test_degenerate_lattice),
        ("Проверка матрицы Грама", test_gram_validation),
        ("Группы кручения", test_torsion_group),
        ("Ядро и дополнение", test_kernel_and_complement),
        ("Насыщение и примитивность", test_saturation_and_primitivity),
        ("Сигнатура и предикаты", test_signature_and_predicates),
        ("Короткие векторы", test_short_vectors),
        ("Форма Смита случайных матриц", test_smith_random_matrices),
        ("Инварианты Смита при унимодулярной замене", test_smith_invariants_under_unimodular_change),
        ("Кручение фактора при замене базиса", test_quotient_torsion_under_basis_change),
        ("Насыщение, дополнение и индекс в E8", test_saturation_complement_and_index),
        ("Проверка целочисленных матриц", test_integer_matrix_validation),
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
