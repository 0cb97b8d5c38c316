"""
Тест тригональных кривых: слои, особые точки, секстики, присоединенные кривые
"""

import random
import sys
from pathlib import Path

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent))

import pytest
import sympy

from src.exceptions import (
    CommonComponentError,
    DegenerateCurveError,
    InvalidInputError,
    NonMinimalFiberError,
    NonSimpleSingularityError,
)
from src.root_embeddings import parse_spec
from src.trigonal_geometry import (
    INFINITY,
    FiberLocation,
    ReducedModel,
    associated_cubic,
    associated_quartic,
    check_merge_identities,
    classify_singular_points,
    curve_components,
    degenerate_family,
    discriminant,
    euler_number,
    fiber_at,
    genus,
    is_irreducible,
    kodaira_to_ade,
    kodaira_type,
    local_intersection_index,
    parse_curve,
    reduce,
    resultant_valuation,
    sextic_singularities,
    sigma_from_fibers,
    sigma_from_points,
    singular_fibers,
    table1_label,
)

# Δ = 6912 (x^3 - 1)^3: три слоя I3 над x^3 = 1 и I3 на бесконечности
FOUR_CUSPS = ReducedModel([0, -24, 0, 0, -3], [-16, 0, 0, -40, 0, 0, 2])

# I5 в x = 0 и на бесконечности, I1 над x^2 - 11x - 1
TWO_A4 = ReducedModel([-3, -36, -42, 36, -3], [2, 36, 150, 0, 150, -36, 2])

LINE_AND_CUSP = "y^3 - y^2 - x^3*y + x^3"


def _kodaira_list(m):
    return [r.kodaira for r in singular_fibers(m)]


def test_kodaira_table():
    assert kodaira_type(0, 0, 0) == "I0"
    assert kodaira_type(0, 0, 5) == "I5"
    assert kodaira_type(1, 1, 2) == "II"
    assert kodaira_type(1, 2, 3) == "III"
    assert kodaira_type(2, 2, 4) == "IV"
    assert kodaira_type(2, 3, 6) == "I0*"
    assert kodaira_type(2, 3, 8) == "I2*"
    assert kodaira_type(3, 4, 8) == "IV*"
    assert kodaira_type(3, 5, 9) == "III*"
    assert kodaira_type(4, 5, 10) == "II*"
    assert kodaira_type(4, 6, 12) == "NonMinimal"
    assert euler_number("I3*") == 9
    assert kodaira_to_ade("I1") is None
    assert str(kodaira_to_ade("I0*")) == "D4"
    assert str(kodaira_to_ade("IV*")) == "E6"
    assert all(check_merge_identities().values())


def test_table1_labels():
    assert table1_label("I0") == "J2,0"
    assert table1_label("I4") == "J2,4"
    assert table1_label("I1*") == "J3,1"
    assert table1_label("II") == "E12"
    assert table1_label("III*") == "E19"
    with pytest.raises(NonMinimalFiberError):
        table1_label("NonMinimal")


def test_parse_curve():
    curve = parse_curve("2*y^3 + 2*x*y + 1")
    assert curve.a.is_zero
    assert curve.to_json() == {"a": [], "b": ["0", "1"], "c": ["1/2"]}
    assert parse_curve('{"b": [0, 1], "c": ["1/2"]}') == curve
    with pytest.raises(InvalidInputError):
        parse_curve("y^3 + x^7")
    with pytest.raises(InvalidInputError):
        parse_curve("y^2 + x")
    with pytest.raises(InvalidInputError):
        parse_curve({"a": [1], "d": [2]})


def test_reduce_and_degenerate():
    model = reduce(parse_curve("y^3 + 3*y^2 + x"))
    assert model.P.as_expr() == -3
    assert model.to_json()["Q"] == ["2", "1"]
    with pytest.raises(DegenerateCurveError):
        reduce(parse_curve("y^3"))


def test_fiber_locations():
    assert FiberLocation.parse("inf") == INFINITY
    assert FiberLocation.parse(3).to_json() == {"x": "3"}
    assert FiberLocation.parse({"x": "1/2"}).value == FiberLocation.parse("1/2").value
    orbit = FiberLocation.parse({"minpoly": [1, 0, 1]})
    assert orbit.degree == 2 and orbit.value is None
    with pytest.raises(InvalidInputError):
        FiberLocation.parse({"minpoly": [-1, 0, 1]})


def test_four_cusps_fibers():
    assert _kodaira_list(FOUR_CUSPS) == ["I3", "I3", "I3"]
    fibers = singular_fibers(FOUR_CUSPS)
    assert fibers[-1].location.is_infinity
    assert sum(f.euler * f.location.degree for f in fibers) == 12
    assert sigma_from_fibers(FOUR_CUSPS) == parse_spec("4A2")
    assert sigma_from_points(FOUR_CUSPS) == parse_spec("4A2")
    assert genus(FOUR_CUSPS) == 0
    assert fiber_at(FOUR_CUSPS, 0).kodaira == "I0"


def test_two_a4_fibers():
    assert _kodaira_list(TWO_A4) == ["I5", "I1", "I5"]
    assert singular_fibers(TWO_A4)[1].location.to_json() == {"minpoly": ["-1", "-11", "1"]}
    assert sigma_from_fibers(TWO_A4) == parse_spec("2A4")


def test_reducible_curve():
    curve = parse_curve(LINE_AND_CUSP)
    assert not is_irreducible(curve)
    assert [c["y_degree"] for c in curve_components(curve)] == [2, 1]
    assert _kodaira_list(curve) == ["I2", "I3", "I2", "III"]
    assert sigma_from_fibers(curve) == parse_spec("A2+4A1")
    assert sigma_from_points(curve) == parse_spec("A2+4A1")
    assert genus(curve) == -1


def test_three_type_iv_fibers():
    curve = parse_curve("y^3 + (x^3 + 1)^2")
    assert _kodaira_list(curve) == ["IV", "IV"]
    assert sigma_from_fibers(curve) == parse_spec("3A2")
    assert genus(curve) == 1
    assert is_irreducible(curve)


def test_non_minimal_fiber():
    curve = parse_curve("y^3 + x^4*y")
    assert _kodaira_list(curve) == ["NonMinimal"]
    points = classify_singular_points(curve)
    assert [p.type for p in points] == ["J10"]
    assert points[0].milnor == 10 and not points[0].simple
    with pytest.raises(NonMinimalFiberError):
        sigma_from_fibers(curve)
    with pytest.raises(NonSimpleSingularityError):
        sigma_from_points(curve)
    with pytest.raises(NonSimpleSingularityError):
        genus(curve)
    assert degenerate_family(reduce(curve), 0) == "J4,0"
    assert degenerate_family(reduce(curve), 1) == "2J10"
    with pytest.raises(NonMinimalFiberError):
        sextic_singularities(reduce(curve), 0)


def test_sextics():
    assert sextic_singularities(FOUR_CUSPS, 0).sigma_C == ("J2,0", "A2", "A2", "A2", "A2")
    assert sextic_singularities(FOUR_CUSPS, 1).sigma_C == ("J2,3", "A2", "A2", "A2")
    assert sextic_singularities(TWO_A4, 0).sigma_C == ("J2,5", "A4")
    assert sextic_singularities(TWO_A4, "inf").sigma_C == ("J2,5", "A4")
    orbit = sextic_singularities(TWO_A4, {"minpoly": [-1, -11, 1]})
    assert orbit.sigma_C == ("J2,1", "A4", "A4")
    assert orbit.to_json()["sigma_B"] == "2A4"


def test_associated_cubic():
    cubic = associated_cubic(parse_curve("y^3 + x^2*y + x^3"), 0)
    assert cubic.equation == "y**3 + y + 1"
    assert cubic.singular_points == ()
    cubic = associated_cubic(parse_curve("y^3 + x*y^2 - x^3*(x - 1)^2"), 0)
    assert [(p["type"], p["location"], p["where"]) for p in cubic.singular_points] \
        == [("A1", {"x": "1"}, "affine")]
    with pytest.raises(InvalidInputError):
        associated_cubic(parse_curve("y^3 + x^2*y + x^3"), 1)


def test_associated_quartic():
    quartic = associated_quartic(parse_curve("(y^2 - x^4)*(y - 1)"), 0)
    assert len(quartic.line_points) == 1
    assert quartic.line_points[0]["intersection"] == 2
    assert quartic.line_points[0]["type"] == "A1"
    inherited = [p for p in quartic.singular_points if p["where"] == "inherited"]
    assert sum(p["degree"] for p in inherited) == 4
    assert quartic.sigma == parse_spec("5A1")


def _random_curve(rng):
    return parse_curve({
        "a": [rng.randint(-3, 3) for _ in range(3)],
        "b": [rng.randint(-5, 5) for _ in range(5)],
        "c": [rng.randint(-5, 5) for _ in range(6)] + [rng.choice((-2, -1, 1, 2))],
    })


def test_random_fiber_budget():
    rng = random.Random(20240611)
    checked = 0
    while checked < 100:
        curve = _random_curve(rng)
        try:
            model = reduce(curve)
        except DegenerateCurveError:
            continue
        fibers = singular_fibers(model)
        assert sum(f.euler * f.location.degree for f in fibers) == 12
        checked += 1


def test_random_smooth_genus():
    rng = random.Random(7)
    smooth = 0
    for _ in range(100):
        curve = _random_curve(rng)
        try:
            delta = discriminant(curve)
        except DegenerateCurveError:
            continue
        if delta.degree() != 12 or sympy.gcd(delta, delta.diff()).degree() > 0:
            continue
        assert classify_singular_points(curve) == []
        assert genus(curve) == 4
        smooth += 1
    assert smooth > 0


def test_dictionary_consistency():
    corpus = [FOUR_CUSPS, TWO_A4, parse_curve(LINE_AND_CUSP), parse_curve("y^3 + (x^3 + 1)^2"),
              parse_curve("y^3 + x*y^2 - x^3*(x - 1)^2"), parse_curve("(y^2 - x^4)*(y - 1)")]
    for curve in corpus:
        assert sigma_from_fibers(curve) == sigma_from_points(curve), str(curve)
    cusp_fiber = fiber_at(parse_curve(LINE_AND_CUSP), 0)
    assert (cusp_fiber.kodaira, cusp_fiber.euler) == ("I3", 3)


def test_intersection_indices():
    assert local_intersection_index("y", "x") == 1
    assert local_intersection_index("y^2 - x^3", "y") == 3
    assert local_intersection_index("y^2 - x^3", "y^2 + x^3") == 6
    assert local_intersection_index("y - 1", "x - 2", (2, 1)) == 1
    assert resultant_valuation("y^2 - x^3", "y") == 3
    with pytest.raises(CommonComponentError):
        local_intersection_index("x*y", "x")


def main():
    """Запуск всех проверок с выводом результата"""
    print("\n" + "="*70)
    print("ТЕСТ ТРИГОНАЛЬНЫХ КРИВЫХ")
    print("="*70 + "\n")

    tests = [
        ("Таблица Тейта", test_kodaira_table),
        ("Особенность в точке O", test_table1_labels),
        ("Разбор кривых", test_parse_curve),
        ("Приведенная модель", test_reduce_and_degenerate),
        ("Положение слоя", test_fiber_locations),
        ("Модель 4A2", test_four_cusps_fibers),
        ("Модель 2A4", test_two_a4_fibers),
        ("Приводимая кривая", test_reducible_curve),
        ("Три слоя типа IV", test_three_type_iv_fibers),
        ("Неминимальный слой", test_non_minimal_fiber),
        ("Секстики", test_sextics),
        ("Присоединенная кубика", test_associated_cubic),
        ("Присоединенная квартика", test_associated_quartic),
        ("Бюджет 12 на случайных кривых", test_random_fiber_budget),
        ("Род гладкой кривой", test_random_smooth_genus),
        ("Слои и точки согласованы", test_dictionary_consistency),
        ("Индексы пересечения", test_intersection_indices),
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
