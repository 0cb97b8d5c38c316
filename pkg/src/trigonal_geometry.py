"""
Тригональные кривые B в |3S0 + 6F| на поверхности Хирцебруха Σ2

В аффинной карте B задается уравнением y^3 + a(x) y^2 + b(x) y + c(x) = 0,
deg a <= 2, deg b <= 4, deg c <= 6. Сдвиг y -> y - a/3 дает приведенную
модель y^3 + P y + Q с дискриминантом Δ = -4P^3 - 27Q^2 (deg <= 12).
Особые слои классифицируются по таблице Тейта (ord P, ord Q, ord Δ),
слой на бесконечности - через замену x -> 1/x с весами 4, 6, 12.

Все вычисления точные: точки над расширениями Q рассматриваются
орбитами Галуа (неприводимый множитель Δ), без плавающей точки.
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from .algebra import (
    X,
    Y,
    KBivariate,
    KPoly,
    NumberField,
    ascending,
    binary_cubic_discriminant,
    binary_cubic_is_cube,
    fraction_text,
    intersection_at_origin,
    order_at,
    parse_xy,
    qpoly,
    to_fraction,
    to_rational,
)
from .exceptions import (
    DegenerateCurveError,
    InvalidInputError,
    NonMinimalFiberError,
    NonSimpleSingularityError,
)
from .root_embeddings import ADESymbol, RootSystemSpec, format_spec

logger = logging.getLogger(__name__)

INF = float("inf")

# Вклад слоев в эйлерову характеристику: Σ по всем слоям = 12
EULER_BUDGET = 12


# ---------------------------------------------------------------------------
# Кривая и приведенная модель
# ---------------------------------------------------------------------------

def _padded_reverse(p: sympy.Poly, weight: int) -> sympy.Poly:
    """u^weight * p(1/u)"""
    coeffs = ascending(p)
    coeffs += [Fraction(0)] * (weight + 1 - len(coeffs))
    return qpoly(list(reversed(coeffs)))


def _check_degree(p: sympy.Poly, bound: int, name: str) -> None:
    if not p.is_zero and p.degree() > bound:
        raise InvalidInputError(f"deg {name} = {p.degree()} > {bound}")


def _shift(p: sympy.Poly, x0) -> sympy.Poly:
    return qpoly(p.as_expr().subs(X, X + to_rational(x0)))


@dataclass(frozen=True)
class TrigonalCurve:
    """
    F(x, y) = y^3 + a(x) y^2 + b(x) y + c(x)

    Коэффициенты приводятся к sympy.Poly над QQ; степени проверяются.
    """

    a: sympy.Poly
    b: sympy.Poly
    c: sympy.Poly

    def __post_init__(self):
        for name, bound in (("a", 2), ("b", 4), ("c", 6)):
            p = qpoly(getattr(self, name))
            _check_degree(p, bound, name)
            object.__setattr__(self, name, p)

    def expr(self):
        return sympy.expand(Y ** 3 + self.a.as_expr() * Y ** 2 + self.b.as_expr() * Y + self.c.as_expr())

    def bivariate(self, field: NumberField) -> KBivariate:
        one = KPoly(field, [field.one])
        return KBivariate.from_y_coefficients([
            KPoly.from_qpoly(field, self.c), KPoly.from_qpoly(field, self.b),
            KPoly.from_qpoly(field, self.a), one,
        ])

    def reversed(self) -> "TrigonalCurve":
        """Та же кривая в карте (u, v) = (1/x, y/x^2)"""
        return TrigonalCurve(_padded_reverse(self.a, 2), _padded_reverse(self.b, 4),
                             _padded_reverse(self.c, 6))

    def translated(self, x0) -> "TrigonalCurve":
        """Кривая F(x + x0, y)"""
        return TrigonalCurve(_shift(self.a, x0), _shift(self.b, x0), _shift(self.c, x0))

    def shifted_y(self, y0) -> Tuple[sympy.Poly, sympy.Poly, sympy.Poly]:
        """Коэффициенты при y^2, y, 1 многочлена F(x, y + y0), y0 рационально"""
        poly = sympy.Poly(self.expr().subs(Y, Y + to_rational(y0)), Y)
        coeffs = {m[0]: qpoly(c) for m, c in poly.terms()}
        zero = qpoly(0)
        return coeffs.get(2, zero), coeffs.get(1, zero), coeffs.get(0, zero)

    def to_json(self) -> Dict:
        return {name: [fraction_text(c) for c in ascending(getattr(self, name))]
                for name in ("a", "b", "c")}

    def __str__(self) -> str:
        return sympy.sstr(self.expr())


@dataclass(frozen=True)
class ReducedModel:
    """y^3 + P(x) y + Q(x), deg P <= 4, deg Q <= 6, Δ не равен тождественно 0"""

    P: sympy.Poly
    Q: sympy.Poly

    def __post_init__(self):
        P, Q = qpoly(self.P), qpoly(self.Q)
        _check_degree(P, 4, "P")
        _check_degree(Q, 6, "Q")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        if self.discriminant.is_zero:
            raise DegenerateCurveError(
                "Дискриминант тождественно равен нулю: кривая содержит кратную компоненту"
            )

    @property
    def discriminant(self) -> sympy.Poly:
        return -4 * self.P ** 3 - 27 * self.Q ** 2

    def reversed(self) -> "ReducedModel":
        return ReducedModel(_padded_reverse(self.P, 4), _padded_reverse(self.Q, 6))

    def as_curve(self) -> TrigonalCurve:
        return TrigonalCurve(qpoly(0), self.P, self.Q)

    def to_json(self) -> Dict:
        return {
            "P": [fraction_text(c) for c in ascending(self.P)],
            "Q": [fraction_text(c) for c in ascending(self.Q)],
            "discriminant": [fraction_text(c) for c in ascending(self.discriminant)],
        }


CurveLike = Union[TrigonalCurve, ReducedModel]


def _as_curve(obj: CurveLike) -> TrigonalCurve:
    return obj.as_curve() if isinstance(obj, ReducedModel) else obj


def _as_model(obj: CurveLike) -> ReducedModel:
    return obj if isinstance(obj, ReducedModel) else reduce(obj)


def reduce(curve: TrigonalCurve) -> ReducedModel:
    """
    Приведенная модель: сдвиг y -> y - a/3

    Returns:
        ReducedModel с P = b - a^2/3, Q = (2a^3 - 9ab + 27c)/27

    Raises:
        DegenerateCurveError: Δ = 0 тождественно
    """
    a, b, c = curve.a, curve.b, curve.c
    P = b - a ** 2 * sympy.Rational(1, 3)
    Q = (2 * a ** 3 - 9 * a * b + 27 * c) * sympy.Rational(1, 27)
    return ReducedModel(P, Q)


def discriminant(m: CurveLike) -> sympy.Poly:
    return _as_model(m).discriminant


def parse_curve(source) -> TrigonalCurve:
    """
    Кривая из текста многочлена или из JSON {"a": [...], "b": [...], "c": [...]}

    Коэффициенты JSON - по возрастанию степени (числа или строки "p/q").
    Текстовый многочлен должен иметь степень 3 по y с постоянным старшим
    коэффициентом, на который он делится.

    Raises:
        InvalidInputError: неверная грамматика или степени
    """
    if isinstance(source, TrigonalCurve):
        return source
    if isinstance(source, str) and source.strip().startswith("{"):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"Некорректный JSON кривой: {e}")
    if isinstance(source, dict):
        unknown = set(source) - {"a", "b", "c"}
        if unknown:
            raise InvalidInputError(f"Неизвестные поля кривой: {sorted(unknown)}")
        try:
            return TrigonalCurve(*(qpoly(list(source.get(k, []))) for k in ("a", "b", "c")))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"Некорректные коэффициенты кривой: {e}")
    expr = parse_xy(source)
    poly = sympy.Poly(expr, Y)
    if poly.degree() != 3:
        raise InvalidInputError(f"Степень по y равна {poly.degree()}, ожидалось 3")
    coeffs = {m[0]: c for m, c in poly.terms()}
    lead = coeffs[3]
    if lead.free_symbols:
        raise InvalidInputError("Коэффициент при y^3 должен быть константой")
    a, b, c = (qpoly(sympy.expand(coeffs.get(k, 0) / lead)) for k in (2, 1, 0))
    return TrigonalCurve(a, b, c)


def curve_components(curve: TrigonalCurve) -> List[Dict]:
    """Разложение F на неприводимые множители над Q"""
    _, factors = sympy.Poly(curve.expr(), X, Y, domain=sympy.QQ).factor_list()
    result = []
    for f, mult in factors:
        result.append({
            "factor": sympy.sstr(f.as_expr()),
            "y_degree": f.degree(Y),
            "multiplicity": mult,
        })
    result.sort(key=lambda r: (-r["y_degree"], r["factor"]))
    return result


def is_irreducible(curve: TrigonalCurve) -> bool:
    components = curve_components(curve)
    return len(components) == 1 and components[0]["multiplicity"] == 1


# ---------------------------------------------------------------------------
# Положение слоя
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberLocation:
    """
    Рациональная точка, орбита Галуа или бесконечность

    minpoly - коэффициенты унитарного неприводимого многочлена по
    возрастанию степени; None означает слой x = ∞.
    """

    minpoly: Optional[Tuple[Fraction, ...]] = None

    @classmethod
    def infinity(cls) -> "FiberLocation":
        return cls(None)

    @classmethod
    def rational(cls, value) -> "FiberLocation":
        return cls((-to_fraction(value), Fraction(1)))

    @classmethod
    def from_poly(cls, g: sympy.Poly) -> "FiberLocation":
        return cls(tuple(ascending(qpoly(g).monic())))

    @classmethod
    def parse(cls, value) -> "FiberLocation":
        """
        Разбор выбора слоя: число, "inf", {"minpoly": [...]} или {"x": ...}

        Raises:
            InvalidInputError: некорректный или приводимый многочлен
        """
        if isinstance(value, FiberLocation):
            return value
        if isinstance(value, dict):
            if "x" in value:
                return cls.parse(value["x"])
            if "minpoly" in value:
                try:
                    g = qpoly(list(value["minpoly"]))
                except (ValueError, ZeroDivisionError) as e:
                    raise InvalidInputError(f"Некорректный минимальный многочлен: {e}")
                if g.is_zero or g.degree() < 1 or not g.is_irreducible:
                    raise InvalidInputError(
                        f"Многочлен {sympy.sstr(g.as_expr())} не является неприводимым степени >= 1"
                    )
                return cls.from_poly(g)
            raise InvalidInputError(f"Не удалось разобрать слой {value}")
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
            return cls.infinity()
        try:
            return cls.rational(value)
        except (ValueError, ZeroDivisionError, InvalidInputError):
            raise InvalidInputError(f"Не удалось разобрать слой {value!r}")

    @property
    def is_infinity(self) -> bool:
        return self.minpoly is None

    @property
    def degree(self) -> int:
        return 1 if self.minpoly is None else len(self.minpoly) - 1

    @property
    def value(self) -> Optional[Fraction]:
        """Рациональная координата x (None для ∞ и орбит степени > 1)"""
        if self.minpoly is None or self.degree != 1:
            return None
        return -self.minpoly[0]

    def poly(self) -> sympy.Poly:
        if self.minpoly is None:
            raise InvalidInputError("У слоя на бесконечности нет минимального многочлена")
        return qpoly(list(self.minpoly))

    @property
    def sort_key(self) -> Tuple:
        if self.minpoly is None:
            return (1, 0, ())
        return (0, self.degree, self.minpoly)

    @property
    def text(self) -> str:
        if self.minpoly is None:
            return "inf"
        if self.degree == 1:
            return fraction_text(self.value)
        return sympy.sstr(self.poly().as_expr())

    def to_json(self) -> Dict:
        if self.minpoly is None:
            return {"x": "inf"}
        if self.degree == 1:
            return {"x": fraction_text(self.value)}
        return {"minpoly": [fraction_text(c) for c in self.minpoly]}


INFINITY = FiberLocation.infinity()


# ---------------------------------------------------------------------------
# Типы Кодаиры
# ---------------------------------------------------------------------------

_KODAIRA_I = re.compile(r"^I(\d+)(\*?)$")

# Ã-обозначения слоев и их имена по Кодаире
KODAIRA_SYNONYMS = {
    "Ã0": "I0",
    "Ã0*": "I1",
    "Ã0**": "II",
    "Ã1*": "III",
    "Ã2*": "IV",
    "Ẽ6": "IV*",
    "Ẽ7": "III*",
    "Ẽ8": "II*",
}

MERGE_IDENTITIES = (
    ("II", ("I1", "I1")),
    ("III", ("I2", "I1")),
)


def kodaira_type(p: float, q: float, d: float) -> str:
    """
    Тип слоя по таблице Тейта (характеристика 0)

    Args:
        p, q, d: ord P, ord Q, ord Δ в точке (math.inf для нулевых P, Q)
    """
    if p >= 4 and q >= 6:
        return "NonMinimal"
    if d == 0:
        return "I0"
    if p == 0:
        return f"I{d}"
    if p == 2 and q == 3 and d > 6:
        return f"I{d - 6}*"
    by_order = {2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}
    if d in by_order:
        return by_order[d]
    raise DegenerateCurveError(f"Несогласованные порядки (ord P, ord Q, ord Δ) = ({p}, {q}, {d})")


def euler_number(kodaira: str) -> int:
    """Эйлерова характеристика слоя (= ord Δ)"""
    match = _KODAIRA_I.match(kodaira)
    if match:
        n = int(match.group(1))
        return n + 6 if match.group(2) else n
    table = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}
    if kodaira not in table:
        raise InvalidInputError(f"Неизвестный тип слоя {kodaira}")
    return table[kodaira]


def kodaira_to_ade(kodaira: str) -> Optional[ADESymbol]:
    """Особенность кривой B, которую дает слой данного типа (None - точка гладкая)"""
    match = _KODAIRA_I.match(kodaira)
    if match:
        n = int(match.group(1))
        if match.group(2):
            return ADESymbol("D", n + 4)
        return ADESymbol("A", n - 1) if n >= 2 else None
    table = {"II": None, "III": ADESymbol("A", 1), "IV": ADESymbol("A", 2),
             "IV*": ADESymbol("E", 6), "III*": ADESymbol("E", 7), "II*": ADESymbol("E", 8)}
    if kodaira not in table:
        raise InvalidInputError(f"Для типа {kodaira} нет особенности ADE")
    return table[kodaira]


def table1_label(kodaira: str) -> str:
    """Непростая особенность секстики в точке O по типу выделенного слоя"""
    match = _KODAIRA_I.match(kodaira)
    if match:
        n = int(match.group(1))
        return f"J3,{n}" if match.group(2) else f"J2,{n}"
    table = {"II": "E12", "III": "E13", "IV": "E14", "IV*": "E18", "III*": "E19", "II*": "E20"}
    if kodaira not in table:
        raise NonMinimalFiberError(f"Слой типа {kodaira} не дает секстики из таблицы")
    return table[kodaira]


def check_merge_identities() -> Dict[str, bool]:
    """Слияние слоев: e(II) = e(I1) + e(I1), e(III) = e(I2) + e(I1)"""
    return {
        f"{target}={'+'.join(parts)}": euler_number(target) == sum(euler_number(p) for p in parts)
        for target, parts in MERGE_IDENTITIES
    }


# ---------------------------------------------------------------------------
# Особые слои
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberReport:
    location: FiberLocation
    kodaira: str
    orders: Tuple[float, float, float]
    euler: int

    @property
    def ade(self) -> Optional[ADESymbol]:
        if self.kodaira == "NonMinimal":
            return None
        return kodaira_to_ade(self.kodaira)

    def to_json(self) -> Dict:
        return {
            "location": self.location.to_json(),
            "kodaira": self.kodaira,
            "orders": [o if o != INF else "inf" for o in self.orders],
            "euler": self.euler,
        }


def _delta_factors(m: ReducedModel) -> List[sympy.Poly]:
    _, factors = m.discriminant.factor_list()
    polys = [g.monic() for g, _ in factors if g.degree() >= 1]
    return sorted(polys, key=lambda g: FiberLocation.from_poly(g).sort_key)


def _degree_or_minus_inf(p: sympy.Poly) -> float:
    return -INF if p.is_zero else p.degree()


def fiber_at(m: CurveLike, location) -> FiberReport:
    """Тип слоя в заданной точке (гладкий слой - I0)"""
    model = _as_model(m)
    loc = FiberLocation.parse(location)
    if loc.is_infinity:
        p = 4 - _degree_or_minus_inf(model.P)
        q = 6 - _degree_or_minus_inf(model.Q)
        d = EULER_BUDGET - model.discriminant.degree()
    else:
        g = loc.poly()
        p, q, d = order_at(model.P, g), order_at(model.Q, g), order_at(model.discriminant, g)
    return FiberReport(loc, kodaira_type(p, q, d), (p, q, d), int(d))


def singular_fibers(m: CurveLike) -> List[FiberReport]:
    """
    Все особые слои: по одному отчету на орбиту корней Δ и, при
    необходимости, слой на бесконечности

    Неминимальные слои попадают в отчет с типом NonMinimal.
    """
    model = _as_model(m)
    reports = [fiber_at(model, FiberLocation.from_poly(g)) for g in _delta_factors(model)]
    if model.discriminant.degree() < EULER_BUDGET:
        reports.append(fiber_at(model, INFINITY))
    total = sum(r.euler * r.location.degree for r in reports)
    logger.debug(f"Особые слои: {len(reports)} орбит, сумма эйлеровых характеристик {total}")
    return reports


def sigma_from_fibers(m: CurveLike) -> RootSystemSpec:
    """
    Набор особенностей B по особым слоям

    Raises:
        NonMinimalFiberError: есть неминимальный слой
    """
    summands: List[ADESymbol] = []
    for report in singular_fibers(m):
        if report.kodaira == "NonMinimal":
            raise NonMinimalFiberError(f"Неминимальный слой в точке {report.location.text}")
        symbol = report.ade
        if symbol is not None:
            summands.extend([symbol] * report.location.degree)
    return RootSystemSpec(tuple(summands))


# ---------------------------------------------------------------------------
# Особые точки
# ---------------------------------------------------------------------------

@dataclass
class LocalPoint:
    """
    Особая точка над орбитой Галуа: поле корня, координаты и росток

    Для слоя на бесконечности координаты - (u, v) = (1/x, y/x^2).
    """

    location: FiberLocation
    field: NumberField
    x: sympy.Poly
    y: sympy.Poly
    germ: KBivariate


def _fiber_point(curve: TrigonalCurve, g: sympy.Poly,
                 location: FiberLocation) -> Optional[LocalPoint]:
    """Особая точка кривой в слое g = 0, если она есть"""
    model = reduce(curve)
    K = NumberField.from_root_of(g)
    theta = K.gen
    P0 = K.eval_qpoly(model.P, theta)
    Q0 = K.eval_qpoly(model.Q, theta)
    # кратный корень Y^3 + P0 Y + Q0
    if P0.is_zero:
        Y0 = K.zero
    else:
        Y0 = K.div(K.mul(K.element(-3), Q0), K.mul(K.element(2), P0))
    cubic = K.mul(Y0, K.mul(Y0, Y0)) + K.mul(P0, Y0) + Q0
    if not cubic.is_zero or not (K.mul(K.element(3), K.mul(Y0, Y0)) + P0).is_zero:
        return None
    dP = K.eval_qpoly(model.P.diff(X), theta)
    dQ = K.eval_qpoly(model.Q.diff(X), theta)
    if not (K.mul(dP, Y0) + dQ).is_zero:
        return None
    y0 = Y0 - K.mul(K.element(sympy.Rational(1, 3)), K.eval_qpoly(curve.a, theta))
    germ = curve.bivariate(K).translate(theta, y0)
    return LocalPoint(location, K, theta, y0, germ)


def singular_locus(curve: CurveLike) -> List[LocalPoint]:
    """Особые точки B (включая слой на бесконечности) в каноническом порядке"""
    curve = _as_curve(curve)
    model = reduce(curve)
    points = []
    for g in _delta_factors(model):
        point = _fiber_point(curve, g, FiberLocation.from_poly(g))
        if point is not None:
            points.append(point)
    if model.discriminant.degree() < EULER_BUDGET:
        point = _fiber_point(curve.reversed(), qpoly(X), INFINITY)
        if point is not None:
            points.append(point)
    return points


def _branch_count(symbol: ADESymbol) -> int:
    n = symbol.index
    if symbol.family == "A":
        return 1 if n % 2 == 0 else 2
    if symbol.family == "D":
        return 3 if n % 2 == 0 else 2
    return {6: 1, 7: 2, 8: 1}[n]


@dataclass(frozen=True)
class GermType:
    label: str
    milnor: int
    multiplicity: int

    @property
    def symbol(self) -> Optional[ADESymbol]:
        match = re.match(r"^([ADE])(\d+)$", self.label)
        if not match:
            return None
        try:
            return ADESymbol(match.group(1), int(match.group(2)))
        except InvalidInputError:
            return None

    @property
    def simple(self) -> bool:
        return self.symbol is not None

    @property
    def branches(self) -> Optional[int]:
        symbol = self.symbol
        return None if symbol is None else _branch_count(symbol)

    @property
    def delta(self) -> Optional[int]:
        r = self.branches
        return None if r is None else (self.milnor + r - 1) // 2


def classify_germ(germ: KBivariate) -> GermType:
    """
    Тип особенности ростка плоской кривой в начале координат

    μ - индекс пересечения частных производных. Кратность 2 дает A_μ;
    кратность 3: кубическая часть без кратных множителей - D4, с двойным
    множителем - D_μ, куб - E6/E7/E8 при μ = 6, 7, 8 (иначе непростая).

    Raises:
        InvalidInputError: точка не лежит на кривой или неособая
    """
    m = germ.multiplicity()
    if m < 2:
        raise InvalidInputError("Точка не является особой точкой кривой")
    mu = intersection_at_origin(germ.partial_x(), germ.partial_y())
    if m == 2:
        return GermType(f"A{mu}", mu, 2)
    if m == 3:
        K = germ.field
        cubic = germ.homogeneous_part(3)
        a, b, c, d = (cubic.get(k, K.zero) for k in ((3, 0), (2, 1), (1, 2), (0, 3)))
        if not binary_cubic_discriminant(a, b, c, d, K).is_zero:
            return GermType("D4", mu, 3)
        if not binary_cubic_is_cube(a, b, c, d, K):
            return GermType(f"D{mu}", mu, 3)
        if mu in (6, 7, 8):
            return GermType(f"E{mu}", mu, 3)
        if mu == 10:
            return GermType("J10", mu, 3)
        if mu > 10:
            return GermType(f"J2,{mu - 10}", mu, 3)
    return GermType(f"X({mu})", mu, int(m))


@dataclass(frozen=True)
class SingularPointReport:
    location: FiberLocation
    y: str
    type: str
    milnor: int
    delta: Optional[int]
    branches: Optional[int]
    multiplicity: int

    @property
    def simple(self) -> bool:
        return self.delta is not None

    @property
    def symbol(self) -> Optional[ADESymbol]:
        return GermType(self.type, self.milnor, self.multiplicity).symbol

    def to_json(self) -> Dict:
        return {
            "location": self.location.to_json(),
            "y": self.y,
            "type": self.type,
            "simple": self.simple,
            "milnor": self.milnor,
            "delta": self.delta,
            "branches": self.branches,
            "multiplicity": self.multiplicity,
        }


def _point_report(point: LocalPoint) -> SingularPointReport:
    kind = classify_germ(point.germ)
    return SingularPointReport(
        location=point.location,
        y=point.field.text(point.y),
        type=kind.label,
        milnor=kind.milnor,
        delta=kind.delta,
        branches=kind.branches,
        multiplicity=kind.multiplicity,
    )


def classify_singular_points(curve: CurveLike) -> List[SingularPointReport]:
    """Особые точки B по орбитам Галуа с типами, μ, δ и числом ветвей"""
    reports = [_point_report(p) for p in singular_locus(curve)]
    logger.debug(f"Особые точки: {', '.join(r.type for r in reports) or 'нет'}")
    return reports


def sigma_from_points(curve: CurveLike) -> RootSystemSpec:
    """
    Набор особенностей по локальной классификации точек

    Raises:
        NonSimpleSingularityError: есть непростая точка
    """
    summands: List[ADESymbol] = []
    for report in classify_singular_points(curve):
        if not report.simple:
            raise NonSimpleSingularityError(
                f"Непростая особенность {report.type} в слое {report.location.text}"
            )
        summands.extend([report.symbol] * report.location.degree)
    return RootSystemSpec(tuple(summands))


def genus(curve: CurveLike) -> int:
    """
    Геометрический род B: 4 - Σ δ

    Raises:
        NonSimpleSingularityError: непростая точка (уменьшает род не менее чем на 6)
    """
    total = 0
    for report in classify_singular_points(curve):
        if not report.simple:
            raise NonSimpleSingularityError(
                f"Непростая особенность {report.type} в слое {report.location.text}: "
                f"род не определяется по δ простых точек"
            )
        total += report.delta * report.location.degree
    return 4 - total


# ---------------------------------------------------------------------------
# Секстики из таблицы
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SexticSpec:
    sigma_B: RootSystemSpec
    f0: FiberLocation
    kodaira: str
    sigma_C: Tuple[str, ...]

    @property
    def text(self) -> str:
        return "+".join(self.sigma_C)

    def to_json(self) -> Dict:
        return {
            "sigma_B": format_spec(self.sigma_B),
            "f0": self.f0.to_json(),
            "kodaira": self.kodaira,
            "sigma_C": list(self.sigma_C),
            "text": self.text,
        }


def sextic_singularities(m: CurveLike, f0) -> SexticSpec:
    """
    Особенности секстики C по модели B и выделенному слою F0

    Непростая точка O определяется типом F0; простая особенность B
    на F0 (если есть) поглощается точкой O.

    Raises:
        NonMinimalFiberError: F0 или другой слой неминимален
    """
    model = _as_model(m)
    fiber = fiber_at(model, f0)
    if fiber.kodaira == "NonMinimal":
        raise NonMinimalFiberError(f"Выбран неминимальный слой {fiber.location.text}")
    sigma_B = sigma_from_fibers(model)
    consumed = fiber.ade
    rest = sigma_B.without(consumed) if consumed is not None else sigma_B
    labels = (table1_label(fiber.kodaira),) + tuple(str(s) for s in rest.summands)
    logger.info(f"Секстика: F0 = {fiber.location.text} ({fiber.kodaira}) -> {'+'.join(labels)}")
    return SexticSpec(sigma_B, fiber.location, fiber.kodaira, labels)


def degenerate_family(m: CurveLike, f0) -> str:
    """
    Секстика при неминимальном слое (точка J10 на B)

    Returns:
        "J4,0", если F0 - этот слой, иначе "2J10"
    """
    model = _as_model(m)
    special = [r.location for r in singular_fibers(model) if r.kodaira == "NonMinimal"]
    if not special:
        raise InvalidInputError("У модели нет неминимального слоя")
    return "J4,0" if FiberLocation.parse(f0) in special else "2J10"


# ---------------------------------------------------------------------------
# Присоединенные кубика и квартика
# ---------------------------------------------------------------------------

def _chart_at(curve: TrigonalCurve, location) -> Tuple[FiberLocation, TrigonalCurve]:
    """Кривая, сдвинутая так, что выбранный рациональный слой - x = 0"""
    loc = FiberLocation.parse(location)
    if loc.is_infinity:
        return loc, curve.reversed()
    if loc.value is None:
        raise InvalidInputError("Присоединенные кривые строятся для рационального слоя")
    return loc, curve.translated(loc.value)


def _coefficients_xy(expr) -> Dict[str, str]:
    poly = sympy.Poly(expr, X, Y, domain=sympy.QQ)
    return {f"{i},{j}": fraction_text(to_fraction(c)) for (i, j), c in sorted(poly.terms())}


def _divide_x(p: sympy.Poly, k: int) -> sympy.Poly:
    quotient, remainder = p.div(qpoly(X ** k))
    if not remainder.is_zero:
        raise InvalidInputError(f"Коэффициент не делится на x^{k}")
    return quotient


def _homogenize(expr, degree: int) -> str:
    z = sympy.Symbol("z")
    poly = sympy.Poly(expr, X, Y)
    terms = [c * X ** i * Y ** j * z ** (degree - i - j) for (i, j), c in poly.terms()]
    return sympy.sstr(sympy.Add(*terms))


@dataclass(frozen=True)
class AssociatedCurve:
    """Присоединенная кубика (degree 3) или квартика (degree 4) в координатах (x, y')"""

    location: FiberLocation
    y0: str
    degree: int
    equation: str
    homogeneous: str
    coefficients: Dict[str, str]
    line_points: Tuple[Dict, ...]
    singular_points: Tuple[Dict, ...]

    @property
    def sigma(self) -> RootSystemSpec:
        """Простые особенности (с учетом степеней орбит)"""
        summands = []
        for point in self.singular_points:
            kind = GermType(point["type"], point["milnor"], point["multiplicity"])
            if kind.simple:
                summands.extend([kind.symbol] * point["degree"])
        return RootSystemSpec(tuple(summands))

    def to_json(self) -> Dict:
        return {
            "location": self.location.to_json(),
            "y0": self.y0,
            "degree": self.degree,
            "equation": self.equation,
            "homogeneous": self.homogeneous,
            "coefficients": self.coefficients,
            "line_points": list(self.line_points),
            "singular_points": list(self.singular_points),
            "sigma": format_spec(self.sigma),
        }


def _point_entry(kind: GermType, location: Dict, y: str, degree: int, where: str) -> Dict:
    return {
        "where": where,
        "location": location,
        "y": y,
        "degree": degree,
        "type": kind.label,
        "milnor": kind.milnor,
        "multiplicity": kind.multiplicity,
    }


def associated_cubic(curve: CurveLike, location) -> AssociatedCurve:
    """
    Присоединенная кубика: G(x, y') = F(x, x y')/x^3 в тройной точке слоя

    Особые точки G вне прямой x = 0 соответствуют остальным особым
    точкам B вне выбранного слоя; отчет содержит аффинные особые точки G.

    Raises:
        InvalidInputError: в слое нет тройной точки
    """
    curve = _as_curve(curve)
    loc, local = _chart_at(curve, location)
    y0 = -to_fraction(local.a.eval(0)) / 3 if not local.a.is_zero else Fraction(0)
    a1, b1, c1 = local.shifted_y(y0)
    if order_at(a1, qpoly(X)) < 1 or order_at(b1, qpoly(X)) < 2 or order_at(c1, qpoly(X)) < 3:
        raise InvalidInputError(f"В слое {loc.text} нет тройной точки")
    cubic = TrigonalCurve(_divide_x(a1, 1), _divide_x(b1, 2), _divide_x(c1, 3))
    expr = cubic.expr()
    points = []
    for point in singular_locus(cubic):
        if point.location.is_infinity:
            continue
        kind = classify_germ(point.germ)
        where = "line" if point.location.value == 0 else "affine"
        points.append(_point_entry(kind, point.location.to_json(), point.field.text(point.y),
                                   point.location.degree, where))
    return AssociatedCurve(
        location=loc,
        y0=fraction_text(y0),
        degree=3,
        equation=sympy.sstr(expr),
        homogeneous=_homogenize(expr, 3),
        coefficients=_coefficients_xy(expr),
        line_points=(),
        singular_points=tuple(points),
    )


def associated_quartic(curve: CurveLike, location) -> AssociatedCurve:
    """
    Присоединенная квартика: D(x, y') = F(x, x y')/x^2 в двойной точке слоя

    Прямая L = {x = 0} - образ исключительной кривой; D(0, y') - касательный
    конус B в выбранной точке. Особенности квартики: точки на L плюс
    особые точки B вне выбранного слоя (их типы сохраняются, слой
    x = ∞ переходит в прямую на бесконечности).

    Raises:
        InvalidInputError: в слое нет двойной точки или точка тройная
    """
    curve = _as_curve(curve)
    loc, local = _chart_at(curve, location)
    point = _fiber_point(local, qpoly(X), FiberLocation.rational(0))
    if point is None:
        raise InvalidInputError(f"В слое {loc.text} нет особой точки")
    if point.germ.multiplicity() != 2:
        raise InvalidInputError(f"Точка в слое {loc.text} не двойная")
    y0 = point.field.to_fraction(point.y)
    a1, b1, c1 = local.shifted_y(y0)
    a_, b_, c_ = a1.as_expr(), _divide_x(b1, 1).as_expr(), _divide_x(c1, 2).as_expr()
    expr = sympy.expand(X * Y ** 3 + a_ * Y ** 2 + b_ * Y + c_)

    # точки на L: корни касательного конуса D(0, y')
    cone = sympy.Poly(expr.subs(X, 0), Y, domain=sympy.QQ)
    line_points = []
    singular_points = []
    if not cone.is_zero:
        _, factors = cone.factor_list()
        roots = [(qpoly(h.as_expr().subs(Y, X)), mult) for h, mult in factors]
        for g, mult in sorted(roots, key=lambda r: FiberLocation.from_poly(r[0]).sort_key):
            K = NumberField.from_root_of(g)
            germ = KBivariate.from_expr(K, expr).translate(K.zero, K.gen)
            entry = {
                "y": K.text(K.gen),
                "minpoly": [fraction_text(c) for c in ascending(g.monic())],
                "intersection": int(mult),
                "degree": g.degree(),
            }
            if germ.multiplicity() >= 2:
                kind = classify_germ(germ)
                entry["type"] = kind.label
                singular_points.append(_point_entry(kind, {"x": "0"}, K.text(K.gen), g.degree(), "line"))
            else:
                entry["type"] = None
            line_points.append(entry)
    for report in classify_singular_points(curve):
        if report.location == loc:
            continue
        kind = GermType(report.type, report.milnor, report.multiplicity)
        singular_points.append(_point_entry(kind, report.location.to_json(), report.y,
                                            report.location.degree, "inherited"))
    return AssociatedCurve(
        location=loc,
        y0=fraction_text(y0),
        degree=4,
        equation=sympy.sstr(expr),
        homogeneous=_homogenize(expr, 4),
        coefficients=_coefficients_xy(expr),
        line_points=tuple(line_points),
        singular_points=tuple(singular_points),
    )


# ---------------------------------------------------------------------------
# Локальный индекс пересечения
# ---------------------------------------------------------------------------

def local_intersection_index(f, g, point: Sequence = (0, 0)) -> int:
    """
    (f . g) в рациональной точке (алгоритм Фултона)

    Args:
        f, g: Многочлены от x, y (текст или выражения sympy)
        point: Рациональные координаты (x0, y0)

    Raises:
        CommonComponentError: общая компонента через точку
    """
    x0, y0 = (to_rational(v) for v in point)
    K = NumberField.rationals()
    shifted = [sympy.expand(parse_xy(h).subs({X: X + x0, Y: Y + y0}, simultaneous=True)) for h in (f, g)]
    F, G = (KBivariate.from_expr(K, h) for h in shifted)
    return intersection_at_origin(F, G)


def resultant_valuation(f, g, x0=0) -> int:
    """
    ord_{x = x0} Res_y(f, g) - сумма индексов пересечения по всем общим
    точкам на прямой x = x0 (для сверки с local_intersection_index)
    """
    res = sympy.Poly(sympy.resultant(parse_xy(f), parse_xy(g), Y), X, domain=sympy.QQ)
    value = order_at(res, qpoly(X - to_rational(x0)))
    if value == INF:
        raise InvalidInputError("Результант тождественно равен нулю")
    return int(value)
