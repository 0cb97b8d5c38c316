"""
Точная арифметика целочисленных решеток

Нормальная форма Смита, группы дискриминанта и кручения фактора,
ортогональные дополнения, четность и сигнатура. Матричные вычисления
идут через DomainMatrix из sympy над ZZ и QQ; плавающая точка не
используется.

Соглашение о знаке: корневые решетки хранятся отрицательно
определенными (корни квадрата -2), см. GramLattice.from_cartan.
"""

import logging
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, isqrt
from typing import Dict, Iterator, List, Sequence, Tuple

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors, smith_normal_decomp

from .exceptions import DegenerateLatticeError, InvalidInputError

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]
Vector = Tuple[int, ...]

_INTEGER_TEXT = re.compile(r"^[+-]?\d+$")


def _integer_entry(value, i: int, j: int) -> int:
    if isinstance(value, bool):
        raise InvalidInputError(f"Элемент ({i}, {j}) не целое число: {value!r}")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, str) and _INTEGER_TEXT.match(value.strip()):
        return int(value.strip())
    raise InvalidInputError(f"Элемент ({i}, {j}) не целое число: {value!r}")


def integer_matrix(M, ncols: int = None) -> Matrix:
    """
    Проверка и нормализация целочисленной матрицы

    Args:
        M: Последовательность строк; элементы - целые или строки вида "-12"
        ncols: Ожидаемое число столбцов (обязательно для матрицы без строк)

    Returns:
        Кортеж строк из int

    Raises:
        InvalidInputError: матрица не прямоугольная или элемент не целый
    """
    if isinstance(M, (str, bytes)) or not isinstance(M, Sequence):
        raise InvalidInputError(f"Матрица задается списком строк, получено {type(M).__name__}")
    width = ncols
    rows = []
    for i, row in enumerate(M):
        if isinstance(row, (str, bytes)) or not isinstance(row, Sequence):
            raise InvalidInputError(f"Строка {i} матрицы не является списком: {row!r}")
        if width is None:
            width = len(row)
        if len(row) != width:
            raise InvalidInputError(f"Матрица не прямоугольная: строка {i} длины {len(row)}, ожидалось {width}")
        rows.append(tuple(_integer_entry(v, i, j) for j, v in enumerate(row)))
    return tuple(rows)


def to_domain_matrix(M, ncols: int = None, domain=ZZ) -> DomainMatrix:
    """Целочисленная матрица в виде DomainMatrix над ZZ (или QQ)"""
    rows = integer_matrix(M, ncols)
    width = len(rows[0]) if rows else (ncols or 0)
    if not rows:
        return DomainMatrix.zeros((0, width), domain)
    return DomainMatrix([[domain(v) for v in row] for row in rows], (len(rows), width), domain)


def from_domain_matrix(dM: DomainMatrix) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in dM.to_list())


def _identity(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, ZZ)


@dataclass(frozen=True)
class GramLattice:
    """Решетка, заданная матрицей Грама"""

    gram: Matrix

    def __post_init__(self):
        gram = integer_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if gram and len(gram[0]) != n:
            raise InvalidInputError(f"Матрица Грама не квадратная: {n} x {len(gram[0])}")
        for i, row in enumerate(gram):
            for j in range(i):
                if row[j] != gram[j][i]:
                    raise InvalidInputError(f"Матрица Грама не симметрична в позиции ({i}, {j})")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @classmethod
    def from_cartan(cls, cartan: Sequence[Sequence[int]]) -> "GramLattice":
        """Мост к положительно определенной матрице Картана: решетка с Грамом -C"""
        return cls(tuple(tuple(-v for v in row) for row in integer_matrix(cartan)))

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "GramLattice":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    def domain_matrix(self) -> DomainMatrix:
        return to_domain_matrix(self.gram, self.rank)

    def negated(self) -> "GramLattice":
        return GramLattice(from_domain_matrix(-self.domain_matrix()))

    def product(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Скалярное произведение векторов, заданных координатами в базисе решетки"""
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)
                   if x[i] and y[j])

    def to_json(self) -> Dict:
        return {"rank": self.rank, "gram": [list(row) for row in self.gram]}

    @classmethod
    def from_json(cls, data: Dict) -> "GramLattice":
        gram = data.get("gram")
        if gram is None:
            raise InvalidInputError("В описании решетки нет поля 'gram'")
        lattice = cls(gram)
        if "rank" in data and data["rank"] != lattice.rank:
            raise InvalidInputError(
                f"Поле rank={data['rank']} не совпадает с размером матрицы {lattice.rank}"
            )
        return lattice


@dataclass(frozen=True)
class SublatticeEmbedding:
    """
    Подрешетка объемлющей решетки

    columns - базисные векторы подрешетки в координатах базиса ambient
    (столбцы матрицы basis).
    """

    ambient: GramLattice
    columns: Matrix

    def __post_init__(self):
        object.__setattr__(self, "columns", integer_matrix(self.columns, self.ambient.rank))

    @property
    def rank(self) -> int:
        return len(self.columns)

    def _rows(self) -> DomainMatrix:
        return to_domain_matrix(self.columns, self.ambient.rank)

    @property
    def basis(self) -> Matrix:
        """Матрица ambient.rank x rank, столбцы - базис подрешетки"""
        if not self.columns:
            return tuple(() for _ in range(self.ambient.rank))
        return from_domain_matrix(self._rows().transpose())

    def induced(self) -> GramLattice:
        """Решетка с индуцированным Грамом basis^T * gram * basis"""
        if not self.columns:
            return GramLattice(())
        C = self._rows()
        return GramLattice(from_domain_matrix(C * self.ambient.domain_matrix() * C.transpose()))

    def with_basis_change(self, W: Sequence[Sequence[int]]) -> "SublatticeEmbedding":
        """Замена базиса подрешетки: новые столбцы basis * W"""
        Wm = to_domain_matrix(W, None if W else 0)
        if Wm.shape[0] != self.rank:
            raise InvalidInputError(f"Матрица замены базиса {Wm.shape} для подрешетки ранга {self.rank}")
        if Wm.shape[1] == 0:
            return SublatticeEmbedding(self.ambient, ())
        return SublatticeEmbedding(self.ambient, from_domain_matrix(Wm.transpose() * self._rows()))


@dataclass(frozen=True)
class TorsionGroup:
    """Конечная абелева группа Z/d1 x Z/d2 x ... (d1 | d2 | ...)"""

    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = integer_matrix([tuple(self.invariant_factors)])[0]
        object.__setattr__(self, "invariant_factors", factors)
        for d in factors:
            if d < 2:
                raise InvalidInputError(f"Инвариантный множитель {d} < 2")
        for d, e in zip(factors, factors[1:]):
            if e % d:
                raise InvalidInputError(f"Нарушена цепочка делимости: {d} не делит {e}")

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def rank_at(self, p: int) -> int:
        """Число инвариантных множителей, делящихся на p"""
        return sum(1 for d in self.invariant_factors if d % p == 0)

    def has_torsion(self, p: int) -> bool:
        return self.rank_at(p) > 0

    def to_json(self) -> Dict:
        return {"factors": list(self.invariant_factors)}

    @classmethod
    def from_json(cls, data: Dict) -> "TorsionGroup":
        return cls(tuple(data.get("factors", ())))

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        for d in sorted(set(self.invariant_factors)):
            k = self.invariant_factors.count(d)
            parts.append(f"(Z/{d})^{k}" if k > 1 else f"Z/{d}")
        return " x ".join(parts)


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D, U и V унимодулярны"""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int = None) -> SmithDecomposition:
    """
    Нормальная форма Смита целочисленной матрицы

    Args:
        M: Матрица (последовательность строк)
        ncols: Число столбцов, если у матрицы нет строк

    Returns:
        SmithDecomposition с U * M * V = D

    Raises:
        InvalidInputError: матрица не прямоугольная или не целочисленная
    """
    dM = to_domain_matrix(M, ncols)
    m, n = dM.shape
    if m == 0 or n == 0:
        zero = tuple(tuple(0 for _ in range(n)) for _ in range(m))
        return SmithDecomposition(from_domain_matrix(_identity(m)), zero, from_domain_matrix(_identity(n)))
    D, U, V = smith_normal_decomp(dM)
    U, D, V = (list(list(row) for row in from_domain_matrix(X)) for X in (U, D, V))
    # знак диагонали sympy не нормализует; переносим его в строку U
    for i in range(min(m, n)):
        if D[i][i] < 0:
            D[i][i] = -D[i][i]
            U[i] = [-v for v in U[i]]
    return SmithDecomposition(*(tuple(tuple(row) for row in X) for X in (U, D, V)))


def _divisor_chain(values: Sequence[int]) -> Tuple[int, ...]:
    chain = sorted(abs(v) for v in values if v)
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            g = gcd(chain[i], chain[j])
            chain[i], chain[j] = g, chain[i] * chain[j] // g
    return tuple(chain)


def smith_invariants(M: Sequence[Sequence[int]], ncols: int = None) -> Tuple[int, ...]:
    """Ненулевые инвариантные множители матрицы (без построения U и V)"""
    dM = to_domain_matrix(M, ncols)
    if 0 in dM.shape:
        return ()
    return _divisor_chain([int(d) for d in invariant_factors(dM)])


def matrix_rank(M: Sequence[Sequence[int]], ncols: int = None) -> int:
    dM = to_domain_matrix(M, ncols, QQ)
    return 0 if 0 in dM.shape else dM.rank()


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Определитель квадратной целочисленной матрицы"""
    dM = to_domain_matrix(M, None if M else 0)
    m, n = dM.shape
    if m != n:
        raise InvalidInputError(f"Определитель неквадратной матрицы {m} x {n}")
    return 1 if n == 0 else int(dM.det())


def discriminant_group(L: GramLattice) -> TorsionGroup:
    """
    Группа дискриминанта L^*/L

    Args:
        L: Невырожденная решетка

    Returns:
        Неединичные инвариантные множители матрицы Грама

    Raises:
        DegenerateLatticeError: det(gram) = 0
    """
    if determinant(L.gram) == 0:
        raise DegenerateLatticeError(f"Решетка ранга {L.rank} вырождена")
    return TorsionGroup(tuple(d for d in smith_invariants(L.gram, L.rank) if d != 1))


def quotient_torsion(e: SublatticeEmbedding) -> TorsionGroup:
    """Кручение фактора ambient / image"""
    return TorsionGroup(tuple(d for d in smith_invariants(e.columns, e.ambient.rank) if d != 1))


def integer_kernel(M: Sequence[Sequence[int]], ncols: int = None) -> Matrix:
    """
    Примитивный базис целочисленного ядра {x : M x = 0}

    Returns:
        Кортеж векторов ядра: столбцы V, которым в D отвечают нулевые столбцы
    """
    snf = smith_normal_form(M, ncols)
    n = len(snf.V)
    nonzero = {j for j, d in enumerate(snf.diagonal) if d}
    return tuple(tuple(snf.V[i][j] for i in range(n)) for j in range(n) if j not in nonzero)


def orthogonal_complement(e: SublatticeEmbedding) -> SublatticeEmbedding:
    """Максимальная подрешетка, ортогональная образу e; всегда примитивна"""
    n = e.ambient.rank
    if not e.columns:
        return SublatticeEmbedding(e.ambient, from_domain_matrix(_identity(n)))
    rows = from_domain_matrix(e._rows() * e.ambient.domain_matrix())
    kernel = integer_kernel(rows, n)
    logger.debug(f"Ортогональное дополнение: ранг {len(kernel)} в решетке ранга {n}")
    return SublatticeEmbedding(e.ambient, kernel)


def saturation(e: SublatticeEmbedding) -> SublatticeEmbedding:
    """Насыщение (S (x) Q) ∩ ambient"""
    n = e.ambient.rank
    annihilator = integer_kernel(e.columns, n)
    return SublatticeEmbedding(e.ambient, integer_kernel(annihilator, n))


def is_primitive(e: SublatticeEmbedding) -> bool:
    return all(d == 1 for d in smith_invariants(e.columns, e.ambient.rank))


def is_even(L: GramLattice) -> bool:
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def is_unimodular(L: GramLattice) -> bool:
    return abs(determinant(L.gram)) == 1


def _sign_changes(values: Sequence[int]) -> int:
    signs = [v > 0 for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature(L: GramLattice) -> Tuple[int, int, int]:
    """
    Сигнатура (положительный, отрицательный, нулевой индексы)

    Корни характеристического многочлена симметричной матрицы
    вещественны, поэтому правило знаков Декарта дает точные числа
    положительных и отрицательных собственных значений.
    """
    n = L.rank
    if n == 0:
        return 0, 0, 0
    coeffs = [int(c) for c in L.domain_matrix().charpoly()]
    null = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        null += 1
    top = len(coeffs) - 1
    pos = _sign_changes(coeffs)
    neg = _sign_changes([c if (top - i) % 2 == 0 else -c for i, c in enumerate(coeffs)])
    return pos, neg, null


def is_definite(L: GramLattice) -> bool:
    pos, neg, null = signature(L)
    return null == 0 and (pos == 0 or neg == 0)


def direct_sum(L1: GramLattice, L2: GramLattice) -> GramLattice:
    n1, n2 = L1.rank, L2.rank
    rows = [list(row) + [0] * n2 for row in L1.gram]
    rows += [[0] * n1 + list(row) for row in L2.gram]
    return GramLattice(rows)


def is_characteristic(L: GramLattice, v: Sequence[int]) -> bool:
    """v.x = x.x (mod 2) для всех базисных x"""
    if len(v) != L.rank:
        raise InvalidInputError(f"Вектор длины {len(v)} в решетке ранга {L.rank}")
    G = L.gram
    return all(
        (sum(G[i][j] * v[j] for j in range(L.rank)) - G[i][i]) % 2 == 0 for i in range(L.rank)
    )


def _positive_form(L: GramLattice) -> Matrix:
    pos, neg, null = signature(L)
    if null or (pos and neg):
        raise InvalidInputError("Перечисление коротких векторов требует определенную решетку")
    return L.gram if neg == 0 else L.negated().gram


def short_vectors(L: GramLattice, norm: int) -> List[Vector]:
    """
    Все ненулевые векторы x с |x.x| = norm в определенной решетке

    Перебор Финке-Поста с точным разложением квадратичной формы над Q.

    Args:
        L: Определенная решетка
        norm: Абсолютное значение квадрата

    Returns:
        Отсортированный список векторов (координаты в базисе L)
    """
    G = _positive_form(L)
    n = L.rank
    q = [[Fraction(v) for v in row] for row in G]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                q[k][m] -= q[k][i] * q[i][m]

    x = [0] * n

    def search(i: int, remaining: Fraction) -> Iterator[Vector]:
        if i < 0:
            yield tuple(x)
            return
        center = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        radius = isqrt(floor(remaining / q[i][i])) + 1
        for value in range(floor(center) - radius, ceil(center) + radius + 1):
            term = q[i][i] * (value - center) ** 2
            if term <= remaining:
                x[i] = value
                yield from search(i - 1, remaining - term)
        x[i] = 0

    found = []
    for vec in search(n - 1, Fraction(norm)):
        if any(vec) and sum(vec[a] * G[a][b] * vec[b] for a in range(n) for b in range(n)) == norm:
            found.append(vec)
    found.sort()
    logger.debug(f"Векторов нормы {norm}: {len(found)}")
    return found
