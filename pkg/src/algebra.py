"""
Точная алгебра над числовыми полями

NumberField - поле Q[a]/(m(a)) для неприводимого m; элементы - sympy.Poly
от генератора a, приведенные по модулю m. KPoly и KBivariate - тонкие
обертки над sympy.Poly в домене QQ или QQ.algebraic_field (НОД, деление,
сдвиг Тейлора); к KBivariate добавлены однородные части и индекс
пересечения по Фултону в особой точке.
"""

import logging
import tokenize
from fractions import Fraction
from functools import cached_property, reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import Domain

from .exceptions import CommonComponentError, InvalidInputError

logger = logging.getLogger(__name__)

X, Y = sympy.symbols("x y")
GEN = sympy.Symbol("a")

Rational = Union[int, Fraction, sympy.Rational]


def to_fraction(value) -> Fraction:
    """sympy.Rational / int / строка 'p/q' -> Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    value = sympy.sympify(value)
    if not value.is_Rational:
        raise InvalidInputError(f"Ожидалось рациональное число, получено {value}")
    return Fraction(int(value.p), int(value.q))


def to_rational(value) -> sympy.Rational:
    f = to_fraction(value)
    return sympy.Rational(f.numerator, f.denominator)


def fraction_text(value) -> str:
    f = to_fraction(value)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def qpoly(value, var: sympy.Symbol = X) -> sympy.Poly:
    """Многочлен над QQ из выражения, Poly или списка коэффициентов (по возрастанию)"""
    if isinstance(value, sympy.Poly):
        return sympy.Poly(value.as_expr(), var, domain=sympy.QQ)
    if isinstance(value, (list, tuple)):
        expr = sum((to_rational(c) * var ** i for i, c in enumerate(value)), sympy.Integer(0))
        return sympy.Poly(expr, var, domain=sympy.QQ)
    return sympy.Poly(sympy.sympify(value), var, domain=sympy.QQ)


def ascending(p: sympy.Poly) -> List[Fraction]:
    """Коэффициенты многочлена по возрастанию степени"""
    if p.is_zero:
        return []
    return [to_fraction(c) for c in reversed(p.all_coeffs())]


def order_at(p: sympy.Poly, g: sympy.Poly) -> float:
    """Кратность неприводимого g в p (math.inf для нулевого p)"""
    if p.is_zero:
        return float("inf")
    k = 0
    while True:
        q, r = p.div(g)
        if not r.is_zero:
            return k
        p, k = q, k + 1


class NumberField:
    """
    Поле Q(a) с минимальным многочленом m

    Элементы - sympy.Poly от GEN, приведенные по модулю m. Для многочленов
    над полем используется домен sympy (QQ или QQ<a>), см. `domain`.

    Args:
        minpoly: Неприводимый над Q многочлен от GEN (или от любой
            переменной - будет переписан через GEN)
    """

    def __init__(self, minpoly):
        poly = minpoly if isinstance(minpoly, sympy.Poly) else sympy.Poly(sympy.sympify(minpoly))
        m = sympy.Poly(poly.as_expr().subs(poly.gens[0], GEN), GEN, domain=sympy.QQ)
        if m.degree() < 1:
            raise InvalidInputError("Минимальный многочлен должен иметь степень >= 1")
        self.minpoly = m.monic()
        self.degree = self.minpoly.degree()
        self.zero = self.element(0)
        self.one = self.element(1)
        self.gen = self.element(GEN)

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(sympy.Poly(GEN, GEN, domain=sympy.QQ))

    @classmethod
    def from_root_of(cls, g: sympy.Poly) -> "NumberField":
        """Поле, порожденное корнем неприводимого g(x)"""
        return cls(sympy.Poly(g.as_expr().subs(g.gens[0], GEN), GEN, domain=sympy.QQ))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @cached_property
    def domain(self) -> Domain:
        """Домен sympy: QQ или QQ.algebraic_field с примитивным элементом a"""
        if self.is_rational:
            return sympy.QQ
        # корень нужен sympy только как метка; минимальный многочлен уже известен
        root = sympy.CRootOf(self.minpoly, 0)
        return sympy.QQ.algebraic_field((self.minpoly, root), alias=GEN)

    def to_domain(self, u):
        """Элемент поля -> элемент домена sympy"""
        if not (isinstance(u, sympy.Poly) and u.gens == (GEN,)):
            u = self.element(u)
        elif u.degree() >= self.degree:
            u = u.rem(self.minpoly)
        if self.is_rational:
            return sympy.QQ.convert(u.LC())
        return self.domain.new(u.rep.to_list())

    def from_domain(self, c) -> sympy.Poly:
        if self.is_rational:
            return sympy.Poly(sympy.QQ.to_sympy(c), GEN, domain=sympy.QQ)
        return sympy.Poly.from_list(c.to_list(), GEN, domain=sympy.QQ)

    def element(self, value) -> sympy.Poly:
        if isinstance(value, sympy.Poly):
            p = sympy.Poly(value.as_expr(), GEN, domain=sympy.QQ)
        elif isinstance(value, Fraction):
            p = sympy.Poly(to_rational(value), GEN, domain=sympy.QQ)
        else:
            p = sympy.Poly(value, GEN, domain=sympy.QQ)
        return p.rem(self.minpoly)

    def add(self, u, v):
        return u + v

    def sub(self, u, v):
        return u - v

    def neg(self, u):
        return -u

    def mul(self, u, v):
        return (u * v).rem(self.minpoly)

    def inv(self, u):
        if u.is_zero:
            raise ZeroDivisionError("Обращение нуля в числовом поле")
        return u.invert(self.minpoly)

    def div(self, u, v):
        return self.mul(u, self.inv(v))

    def pow(self, u, k: int):
        result = self.one
        for _ in range(k):
            result = self.mul(result, u)
        return result

    def is_zero(self, u) -> bool:
        return u.is_zero

    def eval_qpoly(self, p: sympy.Poly, at) -> sympy.Poly:
        """Значение многочлена с рациональными коэффициентами в элементе поля"""
        result = self.zero
        for c in p.all_coeffs():
            result = self.mul(result, at) + self.element(to_rational(c))
        return result.rem(self.minpoly)

    def to_fraction(self, u) -> Optional[Fraction]:
        """Рациональное значение элемента или None"""
        if u.degree() > 0:
            return None
        return to_fraction(u.as_expr())

    def text(self, u) -> str:
        value = self.to_fraction(u)
        if value is not None:
            return fraction_text(value)
        return sympy.sstr(u.as_expr())

    def minpoly_coeffs(self) -> List[str]:
        return [fraction_text(c) for c in ascending(self.minpoly)]

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __repr__(self) -> str:
        return f"NumberField({sympy.sstr(self.minpoly.as_expr())})"


class KPoly:
    """
    Многочлен от x над числовым полем

    Обертка над sympy.Poly в домене `field.domain`; коэффициенты наружу
    отдаются элементами поля по возрастанию степени.
    """

    def __init__(self, field: NumberField, coeffs: Iterable):
        self.field = field
        self.poly = sympy.Poly.from_list([field.to_domain(c) for c in reversed(list(coeffs))],
                                         X, domain=field.domain)

    @classmethod
    def wrap(cls, field: NumberField, poly: sympy.Poly) -> "KPoly":
        result = cls.__new__(cls)
        result.field = field
        result.poly = poly
        return result

    @classmethod
    def from_qpoly(cls, field: NumberField, p: sympy.Poly) -> "KPoly":
        return cls(field, [to_rational(c) for c in ascending(p)])

    @classmethod
    def monomial(cls, field: NumberField, coeff, k: int) -> "KPoly":
        return cls(field, [field.zero] * k + [coeff])

    @property
    def coeffs(self) -> List[sympy.Poly]:
        return [self.field.from_domain(c) for c in reversed(self.poly.rep.to_list())]

    @property
    def degree(self) -> int:
        return -1 if self.poly.is_zero else self.poly.degree()

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def lc(self):
        return self.field.from_domain(self.poly.rep.LC())

    def coeff(self, k: int):
        coeffs = self.coeffs
        return coeffs[k] if 0 <= k < len(coeffs) else self.field.zero

    def __add__(self, other: "KPoly") -> "KPoly":
        return KPoly.wrap(self.field, self.poly + other.poly)

    def __neg__(self) -> "KPoly":
        return KPoly.wrap(self.field, -self.poly)

    def __sub__(self, other: "KPoly") -> "KPoly":
        return KPoly.wrap(self.field, self.poly - other.poly)

    def __mul__(self, other: "KPoly") -> "KPoly":
        return KPoly.wrap(self.field, self.poly * other.poly)

    def scale(self, c) -> "KPoly":
        return KPoly.wrap(self.field, self.poly.mul_ground(self.field.to_domain(c)))

    def divmod(self, other: "KPoly") -> Tuple["KPoly", "KPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("Деление на нулевой многочлен")
        q, r = self.poly.div(other.poly)
        return KPoly.wrap(self.field, q), KPoly.wrap(self.field, r)

    def monic(self) -> "KPoly":
        return self if self.is_zero else KPoly.wrap(self.field, self.poly.monic())

    def derivative(self) -> "KPoly":
        return KPoly.wrap(self.field, self.poly.diff(X))

    def __call__(self, at):
        return self.field.from_domain(self.poly.rep.eval(self.field.to_domain(at)))

    def order_at_zero(self) -> float:
        for i, c in enumerate(reversed(self.poly.rep.to_list())):
            if c:
                return i
        return float("inf")

    def taylor_shift(self, at) -> "KPoly":
        """Коэффициенты p(x + at)"""
        return KPoly.wrap(self.field, self.poly.shift(self.field.to_domain(at)))

    def distinct_root_count(self) -> int:
        """Число различных корней над алгебраическим замыканием"""
        if self.is_zero or self.degree < 1:
            return 0
        return self.poly.sqf_part().degree()

    def __eq__(self, other) -> bool:
        return (isinstance(other, KPoly) and self.field == other.field
                and self.poly.rep.to_list() == other.poly.rep.to_list())

    def texts(self) -> List[str]:
        return [self.field.text(c) for c in self.coeffs]


def kgcd(polys: Sequence[KPoly]) -> KPoly:
    """Унитарный НОД многочленов над полем"""
    if not polys:
        return None
    field = polys[0].field
    g = reduce(lambda a, b: a.gcd(b), (p.poly for p in polys))
    return KPoly.wrap(field, g).monic()


Monomial = Tuple[int, int]


class KBivariate:
    """Многочлен от (x, y) над числовым полем: словарь {(i, j): коэффициент}"""

    def __init__(self, field: NumberField, terms: Dict[Monomial, sympy.Poly] = None):
        self.field = field
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero}

    @classmethod
    def from_expr(cls, field: NumberField, expr) -> "KBivariate":
        poly = sympy.Poly(sympy.sympify(expr), X, Y, domain=sympy.QQ)
        return cls(field, {(int(i), int(j)): field.element(to_rational(c))
                           for (i, j), c in poly.terms()})

    @classmethod
    def from_y_coefficients(cls, coeffs: Sequence[KPoly]) -> "KBivariate":
        """sum_j coeffs[j](x) * y^j"""
        field = coeffs[0].field
        terms = {}
        for j, p in enumerate(coeffs):
            for i, c in enumerate(p.coeffs):
                terms[(i, j)] = c
        return cls(field, terms)

    @classmethod
    def from_poly(cls, field: NumberField, poly: sympy.Poly) -> "KBivariate":
        return cls(field, {(int(i), int(j)): field.from_domain(c)
                           for (i, j), c in poly.rep.to_dict().items()})

    def to_poly(self) -> sympy.Poly:
        """sympy.Poly от (x, y) в домене поля"""
        K = self.field
        return sympy.Poly.from_dict({k: K.to_domain(v) for k, v in self.terms.items()},
                                    X, Y, domain=K.domain)

    def copy(self) -> "KBivariate":
        return KBivariate(self.field, dict(self.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant(self):
        return self.terms.get((0, 0), self.field.zero)

    def __add__(self, other: "KBivariate") -> "KBivariate":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, self.field.zero) + v
        return KBivariate(self.field, terms)

    def __neg__(self) -> "KBivariate":
        return KBivariate(self.field, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "KBivariate") -> "KBivariate":
        return self + (-other)

    def __mul__(self, other: "KBivariate") -> "KBivariate":
        if self.is_zero or other.is_zero:
            return KBivariate(self.field)
        return KBivariate.from_poly(self.field, self.to_poly() * other.to_poly())

    def scale(self, c) -> "KBivariate":
        return KBivariate(self.field, {k: self.field.mul(c, v) for k, v in self.terms.items()})

    def shift_x(self, k: int) -> "KBivariate":
        return KBivariate(self.field, {(i + k, j): v for (i, j), v in self.terms.items()})

    def restrict_y0(self) -> KPoly:
        degree = max((i for (i, j) in self.terms if j == 0), default=-1)
        return KPoly(self.field, [self.terms.get((i, 0), self.field.zero) for i in range(degree + 1)])

    def divide_y(self) -> "KBivariate":
        return KBivariate(self.field, {(i, j - 1): v for (i, j), v in self.terms.items()})

    def swap(self) -> "KBivariate":
        return KBivariate(self.field, {(j, i): v for (i, j), v in self.terms.items()})

    def multiplicity(self) -> float:
        return min((i + j for (i, j) in self.terms), default=float("inf"))

    def homogeneous_part(self, d: int) -> Dict[Monomial, sympy.Poly]:
        return {k: v for k, v in self.terms.items() if k[0] + k[1] == d}

    def partial_x(self) -> "KBivariate":
        K = self.field
        return KBivariate(K, {(i - 1, j): K.element(i) * v
                              for (i, j), v in self.terms.items() if i > 0})

    def partial_y(self) -> "KBivariate":
        K = self.field
        return KBivariate(K, {(i, j - 1): K.element(j) * v
                              for (i, j), v in self.terms.items() if j > 0})

    def translate(self, x0, y0) -> "KBivariate":
        """Многочлен f(x + x0, y + y0)"""
        if self.is_zero:
            return self.copy()
        K = self.field
        shifted = self.to_poly().shift_list([K.to_domain(x0), K.to_domain(y0)])
        return KBivariate.from_poly(K, shifted)

    def weighted_order(self, wx: Fraction, wy: Fraction) -> Fraction:
        return min((wx * i + wy * j for (i, j) in self.terms), default=None)

    def weighted_part(self, wx: Fraction, wy: Fraction, level: Fraction) -> Dict[Monomial, sympy.Poly]:
        return {k: v for k, v in self.terms.items() if wx * k[0] + wy * k[1] == level}

    def to_expr(self):
        return sum((v.as_expr() * X ** i * Y ** j for (i, j), v in self.terms.items()),
                   sympy.Integer(0))


def intersection_at_origin(F: KBivariate, G: KBivariate, max_steps: int = 10_000) -> int:
    """
    Локальный индекс пересечения в начале координат (алгоритм Фултона)

    Raises:
        CommonComponentError: у F и G общая компонента через начало координат
    """
    total = 0
    for _ in range(max_steps):
        if not F.constant().is_zero or not G.constant().is_zero:
            return total
        f0, g0 = F.restrict_y0(), G.restrict_y0()
        if f0.is_zero and g0.is_zero:
            raise CommonComponentError("Кривые имеют общую компоненту через точку")
        if g0.is_zero:
            F, G, f0, g0 = G, F, g0, f0
        if f0.is_zero:
            # F = y * F1, (y . G) = ord_x G(x, 0)
            total += int(g0.order_at_zero())
            F = F.divide_y()
            continue
        if f0.degree > g0.degree:
            F, G, f0, g0 = G, F, g0, f0
        G = G.scale(f0.lc()) - F.shift_x(g0.degree - f0.degree).scale(g0.lc())
    raise CommonComponentError(f"Алгоритм Фултона не завершился за {max_steps} шагов")


def binary_cubic_discriminant(a, b, c, d, field: NumberField):
    """Дискриминант a u^3 + b u^2 v + c u v^2 + d v^3"""
    K = field
    m = K.mul
    return (m(m(b, b), m(c, c)) - m(K.element(4), m(a, m(c, m(c, c))))
            - m(K.element(4), m(m(b, b), m(b, d))) - m(K.element(27), m(m(a, a), m(d, d)))
            + m(K.element(18), m(m(a, b), m(c, d))))


def binary_cubic_is_cube(a, b, c, d, field: NumberField) -> bool:
    """Является ли ненулевая бинарная кубика кубом линейной формы"""
    K = field
    m = K.mul
    three, nine = K.element(3), K.element(9)
    return ((m(b, b) - m(three, m(a, c))).is_zero
            and (m(c, c) - m(three, m(b, d))).is_zero
            and (m(b, c) - m(nine, m(a, d))).is_zero)


_TRANSFORMATIONS = standard_transformations + (implicit_multiplication_application, convert_xor)


def parse_xy(text: str):
    """
    Разбор многочлена от x, y с рациональными коэффициентами

    Допускается запись "F = G" (берется F - G), степень через ^ или **.

    Raises:
        InvalidInputError: синтаксическая ошибка или посторонние символы
    """
    if not isinstance(text, str):
        expr = sympy.sympify(text)
    else:
        sides = text.split("=")
        if len(sides) > 2:
            raise InvalidInputError(f"Лишний знак '=' в '{text}'")
        try:
            parsed = [parse_expr(s.strip() or "0", local_dict={"x": X, "y": Y},
                                 transformations=_TRANSFORMATIONS) for s in sides]
        except (SyntaxError, TypeError, tokenize.TokenError) as e:
            raise InvalidInputError(f"Не удалось разобрать многочлен '{text}': {e}")
        expr = parsed[0] - parsed[1] if len(parsed) == 2 else parsed[0]
    extra = expr.free_symbols - {X, Y}
    if extra:
        raise InvalidInputError(f"Посторонние символы {sorted(map(str, extra))} в '{text}'")
    try:
        domain = sympy.Poly(expr, X, Y).domain
    except sympy.PolynomialError:
        raise InvalidInputError(f"'{text}' - не многочлен от x, y")
    if not (domain.is_QQ or domain.is_ZZ):
        raise InvalidInputError(f"Коэффициенты '{text}' не рациональны")
    return sympy.expand(expr)
