"""
Торические структуры тригональных моделей

Структура: F = (y + b)^3 + (l y + e)^2, deg b <= 2, deg l <= 1, deg e <= 3,
то есть p = y + b - сечение S0 + 2F (dim |S0+2F| = 3), q = l y + e -
сечение S0 + 3F (dim |S0+3F| = 5). В приведенных координатах (a = 0)
получается система 3b + l^2 = 0, 3b^2 + 2le = P, b^3 + e^2 = Q.

Решение: b = -l^2/3; ветви l = 0, l = c (константа) и l = c(x - t0),
где t0 - корень P. Для каждой ветви условия на u = c^2 - коэффициенты
тождества по x; их НОД над полем корня t0 дает допустимые u. Структуры
считаются с точностью до перемасштабирования: старший коэффициент p
по y равен 1, пара (l, e) и (-l, -e) - одна структура.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from .algebra import (
    GEN,
    X,
    KBivariate,
    KPoly,
    NumberField,
    ascending,
    kgcd,
    parse_xy,
    qpoly,
    to_fraction,
)
from .exceptions import DegenerateCurveError, InvalidInputError
from .root_embeddings import RootSystemSpec, dihedral_quotient_count, parse_spec
from .trigonal_geometry import (
    CurveLike,
    ReducedModel,
    TrigonalCurve,
    classify_germ,
    is_irreducible,
    local_intersection_index,
    reduce,
    singular_locus,
)

logger = logging.getLogger(__name__)

U, T, C = sympy.symbols("u t c")

# Проективные размерности линейных систем сечений p и q
SECTION_DIMENSIONS = {"p": 3, "q": 5}


def section_dimension(kind: str) -> int:
    """dim |S0 + 2F| (kind = "p") или dim |S0 + 3F| (kind = "q")"""
    if kind not in SECTION_DIMENSIONS:
        raise InvalidInputError(f"Неизвестное сечение {kind}")
    return SECTION_DIMENSIONS[kind]


@dataclass(eq=False)
class TorusStructure:
    """
    Тройка (b, l, e) над числовым полем field

    Коэффициенты - KPoly по x (по возрастанию степени).
    """

    field: NumberField
    b: KPoly
    l: KPoly
    e: KPoly

    def __post_init__(self):
        for name, bound in (("b", 2), ("l", 1), ("e", 3)):
            if getattr(self, name).degree > bound:
                raise InvalidInputError(
                    f"deg {name} = {getattr(self, name).degree} > {bound} в торической структуре"
                )

    @classmethod
    def rational(cls, b, l, e) -> "TorusStructure":
        K = NumberField.rationals()
        return cls(K, *(KPoly.from_qpoly(K, qpoly(v)) for v in (b, l, e)))

    @property
    def is_rational(self) -> bool:
        return self.field.is_rational

    def compose(self) -> Tuple[KPoly, KPoly, KPoly]:
        """Коэффициенты (a, b, c) кривой (y + b)^3 + (l y + e)^2"""
        K = self.field
        three, two = K.element(3), K.element(2)
        b, l, e = self.b, self.l, self.e
        return (b.scale(three) + l * l,
                (b * b).scale(three) + (l * e).scale(two),
                b * b * b + e * e)

    def same_as(self, other: "TorusStructure") -> bool:
        return (self.field == other.field and self.b == other.b
                and self.l == other.l and self.e == other.e)

    @property
    def sort_key(self) -> Tuple:
        return (self.field.degree, tuple(self.field.minpoly_coeffs()),
                tuple(self.b.texts()), tuple(self.l.texts()), tuple(self.e.texts()))

    def to_json(self) -> Dict:
        return {
            "b": self.b.texts(),
            "l": self.l.texts(),
            "e": self.e.texts(),
            "minpoly": self.field.minpoly_coeffs(),
        }

    @classmethod
    def from_json(cls, data: Dict) -> "TorusStructure":
        """
        Обратное к to_json: коэффициенты - строки элементов поля от "a"

        Raises:
            InvalidInputError: некорректные поля или коэффициенты
        """
        try:
            minpoly = data.get("minpoly")
            if minpoly is None:
                K = NumberField.rationals()
            else:
                K = NumberField(qpoly(list(minpoly), GEN))

            def read(name: str) -> KPoly:
                return KPoly(K, [K.element(sympy.sympify(str(c), locals={"a": GEN}))
                                 for c in data.get(name, [])])

            return cls(K, read("b"), read("l"), read("e"))
        except (sympy.SympifyError, sympy.PolynomialError, TypeError, ValueError) as e:
            raise InvalidInputError(f"Некорректная торическая структура: {e}")


@dataclass
class DetectionReport:
    structures: List[TorusStructure]
    count_over_closure: int
    listing_complete: bool = True
    irreducible: bool = True
    warnings: List[str] = dataclass_field(default_factory=list)

    def to_json(self) -> Dict:
        return {
            "count": self.count_over_closure,
            "structures": [s.to_json() for s in self.structures],
            "listing_complete": self.listing_complete,
            "irreducible": self.irreducible,
            "warnings": list(self.warnings),
        }


def compose_torus(b, l, e) -> TrigonalCurve:
    """Кривая (y + b)^3 + (l y + e)^2 по рациональным b, l, e"""
    s = TorusStructure.rational(b, l, e)
    a_, b_, c_ = (qpoly([s.field.to_fraction(c) for c in p.coeffs]) for p in s.compose())
    return TrigonalCurve(a_, b_, c_)


def verify_torus(m: CurveLike, s: TorusStructure) -> bool:
    """Выполнено ли тождество F = (y + b)^3 + (l y + e)^2 над полем структуры"""
    curve = m.as_curve() if isinstance(m, ReducedModel) else m
    K = s.field
    expected = [KPoly.from_qpoly(K, p) for p in (curve.a, curve.b, curve.c)]
    return all(u == v for u, v in zip(s.compose(), expected))


# ---------------------------------------------------------------------------
# Исключение переменных
# ---------------------------------------------------------------------------

def _u_polynomial(K: NumberField, coeff) -> KPoly:
    """Коэффициент тождества (многочлен от u и t) как KPoly по u над Q(t0)"""
    poly = sympy.Poly(coeff, U)
    return KPoly(K, [K.element(sympy.sympify(c).subs(T, GEN)) for c in reversed(poly.all_coeffs())])


def _branch_gcd(model: ReducedModel, h: Optional[sympy.Poly]) -> Tuple[NumberField, KPoly]:
    """
    НОД условий на u = c^2 для ветви l = c (h = None) или l = c(x - t0), h(t0) = 0
    """
    P, Q = model.P.as_expr(), model.Q.as_expr()
    if h is None:
        K = NumberField.rationals()
        expr = (P - U ** 2 / 3) ** 2 - sympy.Rational(4, 27) * U ** 4 - 4 * U * Q
    else:
        K = NumberField.from_root_of(h)
        P1 = sympy.quo(P, X - T, X)
        expr = (P1 ** 2 - sympy.Rational(2, 3) * U ** 2 * P1 * (X - T) ** 3
                - sympy.Rational(1, 27) * U ** 4 * (X - T) ** 6 - 4 * U * Q)
    coeffs = sympy.Poly(sympy.expand(expr), X).all_coeffs()
    system = [_u_polynomial(K, c) for c in coeffs]
    G = kgcd(system)
    if G.is_zero:
        raise DegenerateCurveError("Система для торических структур вырождена")
    return K, G


def _nonzero_root_count(G: KPoly) -> int:
    n = G.distinct_root_count()
    if n and G.coeff(0).is_zero:
        n -= 1
    return n


def _lift_to_tu(G: KPoly):
    """KPoly по u над Q(t0) -> выражение от (t, u)"""
    return sum((c.as_expr().subs(GEN, T) * U ** k for k, c in enumerate(G.coeffs)), sympy.Integer(0))


def _c_orbits(poly_c) -> List[sympy.Poly]:
    """Неприводимые множители по c без c = 0, по одному из пары c, -c"""
    poly = sympy.Poly(poly_c, C, domain=sympy.QQ)
    if poly.is_zero:
        return []
    _, factors = poly.factor_list()
    seen, result = [], []
    for phi, _ in factors:
        phi = phi.monic()
        if phi.degree() < 1 or phi == sympy.Poly(C, C, domain=sympy.QQ):
            continue
        mirror = sympy.Poly(phi.as_expr().subs(C, -C), C, domain=sympy.QQ).monic()
        if mirror in seen:
            continue
        seen.append(phi)
        result.append(phi)
    return sorted(result, key=lambda p: (p.degree(), [to_fraction(c) for c in ascending(p)]))


def _field_of(phi: sympy.Poly) -> Tuple[NumberField, sympy.Poly]:
    """Поле Q(c) для неприводимого phi(c) и образ c в нем"""
    if phi.degree() == 1:
        L = NumberField.rationals()
        return L, L.element(-to_fraction(phi.monic().nth(0)))
    L = NumberField(phi)
    return L, L.gen


def _square_decomposition(Q: sympy.Poly) -> Optional[Tuple[Fraction, sympy.Poly]]:
    """Q = k s^2 с рациональными k и s, либо None"""
    _, factors = Q.factor_list()
    if any(mult % 2 for _, mult in factors):
        return None
    s = qpoly(1)
    for f, mult in factors:
        s = s * f ** (mult // 2)
    return to_fraction(Q.LC()) / to_fraction(s.LC()) ** 2, s


def _solve_from_l(model: ReducedModel, L: NumberField, l: KPoly) -> Optional[Tuple[KPoly, KPoly]]:
    """(b, e) в приведенных координатах по заданному l != 0, если тождество выполняется"""
    P, Q = KPoly.from_qpoly(L, model.P), KPoly.from_qpoly(L, model.Q)
    third = L.element(sympy.Rational(1, 3))
    l2 = l * l
    b = l2.scale(-third)
    e, r = (P - (l2 * l2).scale(third)).divmod(l.scale(L.element(2)))
    if not r.is_zero or not (b * b * b + e * e) == Q:
        return None
    return b, e


def _to_curve_coordinates(curve: TrigonalCurve, L: NumberField,
                          b: KPoly, l: KPoly, e: KPoly) -> TorusStructure:
    """B = b + a/3, E = e + l a/3"""
    third_a = KPoly.from_qpoly(L, curve.a).scale(L.element(sympy.Rational(1, 3)))
    return TorusStructure(L, b + third_a, l, e + l * third_a)


def _normalize_sign(s: TorusStructure) -> TorusStructure:
    """Для рациональной структуры старший коэффициент l (или e при l = 0) положителен"""
    if not s.is_rational:
        return s
    lead = s.l.lc() if not s.l.is_zero else s.e.lc()
    if s.field.to_fraction(lead) < 0:
        return TorusStructure(s.field, s.b, -s.l, -s.e)
    return s


def _fixed_points(model: ReducedModel) -> List[sympy.Poly]:
    """Многочлены для t0 в ветви l = c(x - t0)"""
    if not model.P.is_zero:
        _, factors = model.P.factor_list()
        return [f.monic() for f, _ in factors if f.degree() >= 1]
    # P = 0: Q должно быть k (x - t0)^6
    Q = model.Q
    if Q.degree() != 6:
        return []
    t0 = -to_fraction(Q.monic().nth(5)) / 6
    if Q.monic() == qpoly((X - sympy.Rational(t0.numerator, t0.denominator)) ** 6):
        return [qpoly(X - sympy.Rational(t0.numerator, t0.denominator))]
    return []


def detect_torus(m: CurveLike) -> DetectionReport:
    """
    Все торические структуры модели

    Returns:
        DetectionReport: структуры (по одной на орбиту Галуа, в
        координатах переданной кривой) и число структур над замыканием

    Raises:
        DegenerateCurveError: Δ = 0 тождественно
    """
    curve = m.as_curve() if isinstance(m, ReducedModel) else m
    model = reduce(curve)
    report = DetectionReport(structures=[], count_over_closure=0)
    found: List[TorusStructure] = []

    # l = 0: P = 0, Q = e^2
    if model.P.is_zero:
        decomposition = _square_decomposition(model.Q)
        if decomposition is not None:
            k, s = decomposition
            root = sympy.sqrt(sympy.Rational(k.numerator, k.denominator))
            if root.is_Rational:
                L = NumberField.rationals()
                r = L.element(root)
            else:
                L = NumberField(sympy.Poly(GEN ** 2 - sympy.Rational(k.numerator, k.denominator), GEN))
                r = L.gen
            e = KPoly.from_qpoly(L, s).scale(r)
            zero = KPoly(L, [])
            found.append(_to_curve_coordinates(curve, L, zero, zero, e))
            report.count_over_closure += 1

    # l = c
    K, G = _branch_gcd(model, None)
    report.count_over_closure += _nonzero_root_count(G)
    for phi in _c_orbits(_lift_to_tu(G).subs(U, C ** 2)):
        L, c = _field_of(phi)
        l = KPoly(L, [c])
        solved = _solve_from_l(model, L, l)
        if solved is None:
            report.listing_complete = False
            continue
        found.append(_to_curve_coordinates(curve, L, solved[0], l, solved[1]))

    # l = c (x - t0)
    for h in _fixed_points(model):
        K, G = _branch_gcd(model, h)
        report.count_over_closure += h.degree() * _nonzero_root_count(G)
        if _nonzero_root_count(G) == 0:
            continue
        G_tu = _lift_to_tu(G)
        h_t = h.as_expr().subs(X, T)
        for phi in _c_orbits(sympy.resultant(h_t, G_tu.subs(U, C ** 2), T)):
            L, c = _field_of(phi)
            u = L.mul(c, c)
            h_L = KPoly(L, [L.element(v) for v in ascending(h)])
            G_t = KPoly(L, [])
            for k, coeff in enumerate(G.coeffs):
                G_t = G_t + KPoly(L, [L.element(v) for v in ascending(coeff)]).scale(L.pow(u, k))
            common = kgcd([h_L, G_t])
            if common.degree != 1:
                report.listing_complete = False
                report.warnings.append(
                    f"Орбита c с минимальным многочленом {sympy.sstr(phi.as_expr())} "
                    f"не определяет t0 однозначно; структура не выписана"
                )
                continue
            t0 = -common.coeff(0)
            l = KPoly(L, [-L.mul(c, t0), c])
            solved = _solve_from_l(model, L, l)
            if solved is None:
                report.listing_complete = False
                continue
            found.append(_to_curve_coordinates(curve, L, solved[0], l, solved[1]))

    for s in found:
        if not verify_torus(curve, s):
            logger.warning(f"Найденная структура не проходит проверку: {s.to_json()}")
            report.listing_complete = False
            continue
        report.structures.append(_normalize_sign(s))
    report.structures.sort(key=lambda s: s.sort_key)
    report.irreducible = is_irreducible(curve)
    if not report.irreducible:
        report.warnings.append("Кривая приводима: счет структур не связан с кручением E8/Σ")
    logger.info(
        f"Торические структуры: {report.count_over_closure} над замыканием, "
        f"выписано {len(report.structures)}"
    )
    return report


def expected_torus_count(spec: Union[str, RootSystemSpec]) -> int:
    """Число подгрупп Z/3 в 3-кручении E8/Σ"""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    return dihedral_quotient_count(spec, 3)


# ---------------------------------------------------------------------------
# Внутренние и внешние точки
# ---------------------------------------------------------------------------

def inner_outer_split(m: CurveLike, s: TorusStructure) -> Dict:
    """
    Разметка особых точек: внутренние лежат на {p = 0} ∩ {q = 0}

    Для орбиты Галуа степени d число внутренних точек - степень
    НОД(g, y(x) + b, l y(x) + e) над полем структуры.

    Raises:
        InvalidInputError: структура не задает кривую
    """
    curve = m.as_curve() if isinstance(m, ReducedModel) else m
    if not verify_torus(curve, s):
        raise InvalidInputError("Торическая структура не задает данную кривую")
    L = s.field
    points = []
    for point in singular_locus(curve):
        degree = point.location.degree
        if point.location.is_infinity:
            v0 = L.element(point.field.to_fraction(point.y))
            p_value = v0 + s.b.coeff(2)
            q_value = L.mul(s.l.coeff(1), v0) + s.e.coeff(3)
            inner = 1 if p_value.is_zero and q_value.is_zero else 0
        else:
            g = KPoly(L, [L.element(v) for v in ascending(point.location.poly())])
            y_hat = KPoly(L, [L.element(v) for v in ascending(point.y)])
            inner = kgcd([g, y_hat + s.b, s.l * y_hat + s.e]).degree
        points.append({
            "location": point.location.to_json(),
            "y": point.field.text(point.y),
            "type": classify_germ(point.germ).label,
            "degree": degree,
            "inner": inner,
            "outer": degree - inner,
        })
    return {
        "points": points,
        "inner": sum(p["inner"] for p in points),
        "outer": sum(p["outer"] for p in points),
    }


# ---------------------------------------------------------------------------
# Оценки индексов пересечения по многоугольникам Ньютона
# ---------------------------------------------------------------------------

def _has_monomials(F: KBivariate, monomials: Sequence[Tuple[int, int]]) -> bool:
    return all(k in F.terms for k in monomials)


def _semiquasihomogeneous(F: KBivariate, a: int, b: int) -> bool:
    """Росток типа (a, b): главная часть с весами (1/a, 1/b) содержит x^a и y^b"""
    order = F.weighted_order(Fraction(1, a), Fraction(1, b))
    return order == 1 and _has_monomials(F, [(a, 0), (0, b)])


def _adjacent(F: KBivariate, a: int, b: int) -> bool:
    """Многоугольник Ньютона не ниже прямой через (a, 0) и (0, b)"""
    order = F.weighted_order(Fraction(1, a), Fraction(1, b))
    return order is None or order >= 1


def newton_divisibility_check(instance: Dict) -> Dict:
    """
    Проверка оценки (h . p) >= bound на конкретном ростке

    Args:
        instance: {"kind": "A" | "E6", "k": int (для A_{3k-1}),
            "p": ..., "q": ..., "h": ..., "mode": "h1" | "h2",
            "lemma": "intersection" | "intersection_a2"}
            Росток φ = q^2 + p h (h1) или q^2 + p^2 h (h2) в начале координат.

    Returns:
        Отчет: выполнение гипотез, индекс, граница и итог (None, если
        гипотезы нарушены)
    """
    kind = instance.get("kind", "A")
    k = int(instance.get("k", 1))
    mode = instance.get("mode", "h1")
    lemma = instance.get("lemma", "intersection")
    if kind not in ("A", "E6") or mode not in ("h1", "h2") or k < 1:
        raise InvalidInputError(f"Некорректный экземпляр: kind={kind}, k={k}, mode={mode}")
    if lemma not in ("intersection", "intersection_a2"):
        raise InvalidInputError(f"Неизвестная лемма {lemma}")
    p, q, h = (parse_xy(instance[name]) for name in ("p", "q", "h"))
    phi = sympy.expand(q ** 2 + (p if mode == "h1" else p ** 2) * h)

    K = NumberField.rationals()
    F, Fp, Fq = (KBivariate.from_expr(K, v) for v in (phi, p, q))
    if kind == "E6":
        expected, phi_type, p_type, q_type = "E6", (4, 3), (2, 1), (2, 2)
        bound = 3 if mode == "h1" else 2
    else:
        expected, phi_type, p_type = f"A{3 * k - 1}", (3 * k, 2), (k, 1)
        q_type = ((3 * k + 1) // 2, 1)
        bound = -(-(3 * k + 1) // 2) if mode == "h1" else k
    if lemma == "intersection_a2":
        if kind != "A" or k != 1:
            raise InvalidInputError("Вариант для A2 требует kind = A, k = 1")
        q_type, bound = (1, 1), 1

    try:
        germ_type = classify_germ(F).label
    except InvalidInputError:
        germ_type = None
    hypotheses = {
        "phi_semiquasihomogeneous": _semiquasihomogeneous(F, *phi_type),
        "phi_type": germ_type == expected,
        "p_semiquasihomogeneous": _semiquasihomogeneous(Fp, *p_type),
        "q_adjacent": _adjacent(Fq, *q_type),
    }
    hold = all(hypotheses.values())
    index = local_intersection_index(h, p)
    if not hold:
        logger.info(f"Гипотезы не выполнены для {instance}: {hypotheses}")
    return {
        "kind": kind,
        "k": k,
        "lemma": lemma,
        "mode": mode,
        "phi": sympy.sstr(phi),
        "type": germ_type,
        "hypotheses": hypotheses,
        "hypotheses_hold": hold,
        "index": index,
        "bound": bound,
        "holds": (index >= bound) if hold else None,
    }
