"""
Системы корней ADE и их вложения в E8

Модель E8 - четная координатная система: векторы из Z^8 или (Z+1/2)^8
с четной суммой координат. Векторы хранятся удвоенными (целые X = 2x),
форма отрицательно определена: x.y = -(X.Y)/4, корни имеют квадрат -2.

Классы вложений считаются с точностью до Aut(E8) = W(E8). Упорядоченные
наборы простых корней перебираются по дереву орбит: поточечный
стабилизатор уже поставленных корней порожден отражениями в корнях,
ортогональных им, поэтому орбиты следующего корня вычисляются обходом
по простым отражениям этой подсистемы. Классы подрешеток получаются
склейкой орбит наборов симметриями диаграмм Дынкина.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import sympy
from tqdm import tqdm

from .exceptions import (
    InvalidInputError,
    NotEmbeddableError,
    SearchBudgetExceeded,
    ToolkitError,
)
from .lattice_core import (
    GramLattice,
    SublatticeEmbedding,
    TorsionGroup,
    discriminant_group,
    is_characteristic,
    is_definite,
    is_even,
    is_primitive,
    is_unimodular,
    orthogonal_complement,
    quotient_torsion,
    short_vectors,
    signature,
)

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 200_000
DEFAULT_ISOMETRY_BUDGET = 50_000

_FAMILY_ORDER = {"E": 0, "D": 1, "A": 2}
_SPEC_TOKEN = re.compile(r"^(\d*)\s*([ADE])\s*_?\s*(\d+)$")


@dataclass(frozen=True, order=True)
class ADESymbol:
    """Слагаемое A_p (p>=1), D_q (q>=4) или E_r (r=6,7,8)"""

    family: str
    index: int

    def __post_init__(self):
        if self.family == "A" and self.index >= 1:
            return
        if self.family == "D" and self.index >= 4:
            return
        if self.family == "E" and self.index in (6, 7, 8):
            return
        raise InvalidInputError(f"Недопустимый символ ADE: {self.family}{self.index}")

    @property
    def rank(self) -> int:
        return self.index

    @property
    def sort_key(self) -> Tuple[int, int]:
        return _FAMILY_ORDER[self.family], -self.index

    def __str__(self) -> str:
        return f"{self.family}{self.index}"

    def edges(self) -> List[Tuple[int, int]]:
        """
        Ребра диаграммы Дынкина в локальной нумерации

        A_n: цепочка 0..n-1; D_n: цепочка 0..n-2 и узел n-1 у узла n-3;
        E_n: цепочка 0..n-2 и узел n-1 у узла 2.
        """
        n = self.index
        if self.family == "A":
            return [(i, i + 1) for i in range(n - 1)]
        chain = [(i, i + 1) for i in range(n - 2)]
        if self.family == "D":
            return chain + [(n - 3, n - 1)]
        return chain + [(2, n - 1)]

    def symmetries(self) -> List[Tuple[int, ...]]:
        """Порождающие автоморфизмы диаграммы (перестановки узлов)"""
        n = self.index
        ident = list(range(n))
        result = []
        if self.family == "A" and n >= 2:
            result.append(tuple(reversed(ident)))
        elif self.family == "D":
            swap = ident[:]
            swap[n - 2], swap[n - 1] = n - 1, n - 2
            result.append(tuple(swap))
            if n == 4:
                result.append((2, 1, 3, 0))
        elif self.family == "E" and n == 6:
            result.append((4, 3, 2, 1, 0, 5))
        return result

    def euler_contribution(self) -> int:
        """Минимальная эйлерова характеристика слоя, дающего эту особенность"""
        if self.family == "A":
            return 2 if self.index == 1 else self.index + 1
        if self.family == "D":
            return self.index + 2
        return {6: 8, 7: 9, 8: 10}[self.index]


@dataclass(frozen=True)
class RootSystemSpec:
    """Мультимножество символов ADE в каноническом порядке"""

    summands: Tuple[ADESymbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=lambda s: s.sort_key)))

    @property
    def rank(self) -> int:
        return sum(s.rank for s in self.summands)

    @property
    def is_empty(self) -> bool:
        return not self.summands

    def __str__(self) -> str:
        return format_spec(self)

    def layout(self) -> List[Tuple[ADESymbol, int]]:
        """Слагаемые со сдвигами их узлов в общей нумерации"""
        offset, result = 0, []
        for s in self.summands:
            result.append((s, offset))
            offset += s.rank
        return result

    def gram(self) -> Tuple[Tuple[int, ...], ...]:
        """Отрицательно определенная матрица Грама простых корней"""
        n = self.rank
        G = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
        for symbol, offset in self.layout():
            for i, j in symbol.edges():
                G[offset + i][offset + j] = G[offset + j][offset + i] = 1
        return tuple(tuple(row) for row in G)

    def symmetry_generators(self) -> List[Tuple[int, ...]]:
        """Порождающие группы автоморфизмов диаграммы как перестановки позиций"""
        n = self.rank
        gens = []
        layout = self.layout()
        for symbol, offset in layout:
            for local in symbol.symmetries():
                perm = list(range(n))
                for i, j in enumerate(local):
                    perm[offset + i] = offset + j
                gens.append(tuple(perm))
        for (s1, o1), (s2, o2) in zip(layout, layout[1:]):
            if s1 == s2:
                perm = list(range(n))
                for i in range(s1.rank):
                    perm[o1 + i], perm[o2 + i] = o2 + i, o1 + i
                gens.append(tuple(perm))
        return gens

    def minimal_euler(self) -> int:
        return sum(s.euler_contribution() for s in self.summands)

    def without(self, symbol: ADESymbol) -> "RootSystemSpec":
        items = list(self.summands)
        items.remove(symbol)
        return RootSystemSpec(tuple(items))

    def plus(self, other: "RootSystemSpec") -> "RootSystemSpec":
        return RootSystemSpec(self.summands + other.summands)


def parse_spec(text: str) -> RootSystemSpec:
    """
    Разбор строки вида "3A2+A1", "E6+A2", "A5⊕A2⊕A1"

    Пустая строка и "0" - пустая система корней.
    """
    cleaned = (text or "").replace("⊕", "+").strip()
    if cleaned in ("", "0", "∅"):
        return RootSystemSpec()
    summands = []
    for token in cleaned.split("+"):
        match = _SPEC_TOKEN.match(token.strip())
        if not match:
            raise InvalidInputError(f"Не удалось разобрать слагаемое '{token.strip()}' в '{text}'")
        count = int(match.group(1)) if match.group(1) else 1
        summands.extend([ADESymbol(match.group(2), int(match.group(3)))] * count)
    return RootSystemSpec(tuple(summands))


def format_spec(spec: RootSystemSpec) -> str:
    if spec.is_empty:
        return "0"
    parts, items = [], list(spec.summands)
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j] == items[i]:
            j += 1
        count = j - i
        parts.append(f"{count}{items[i]}" if count > 1 else str(items[i]))
        i = j
    return "+".join(parts)


def cartan_gram(spec: RootSystemSpec) -> GramLattice:
    return GramLattice(spec.gram())


def candidate_specs(max_rank: int = 8) -> List[RootSystemSpec]:
    """Все непустые мультимножества символов ADE суммарного ранга <= max_rank"""
    symbols = [ADESymbol("A", n) for n in range(1, max_rank + 1)]
    symbols += [ADESymbol("D", n) for n in range(4, max_rank + 1)]
    symbols += [ADESymbol("E", n) for n in (6, 7, 8) if n <= max_rank]
    result = []

    def extend(start: int, chosen: List[ADESymbol], rank: int) -> None:
        if chosen:
            result.append(RootSystemSpec(tuple(chosen)))
        for k in range(start, len(symbols)):
            if rank + symbols[k].rank <= max_rank:
                chosen.append(symbols[k])
                extend(k, chosen, rank + symbols[k].rank)
                chosen.pop()

    extend(0, [], 0)
    result.sort(key=lambda s: (s.rank, format_spec(s)))
    return result


# ---------------------------------------------------------------------------
# Модель E8
# ---------------------------------------------------------------------------

Root = Tuple[int, ...]


def _doubled_dot(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def _generate_roots() -> List[Root]:
    roots = set()
    for i in range(8):
        for j in range(i + 1, 8):
            for si, sj in cartesian((2, -2), repeat=2):
                v = [0] * 8
                v[i], v[j] = si, sj
                roots.add(tuple(v))
    for signs in cartesian((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.add(signs)
    return sorted(roots)


# простые корни Бурбаки, удвоенные координаты
_SIMPLE_ROOTS: Tuple[Root, ...] = (
    (1, -1, -1, -1, -1, -1, -1, 1),
    (2, 2, 0, 0, 0, 0, 0, 0),
    (-2, 2, 0, 0, 0, 0, 0, 0),
    (0, -2, 2, 0, 0, 0, 0, 0),
    (0, 0, -2, 2, 0, 0, 0, 0),
    (0, 0, 0, -2, 2, 0, 0, 0),
    (0, 0, 0, 0, -2, 2, 0, 0),
    (0, 0, 0, 0, 0, -2, 2, 0),
)

_HEIGHT_WEIGHTS = tuple(3 ** k for k in range(8))


@dataclass
class _OrbitPartition:
    """Разбиение корней на орбиты поточечного стабилизатора набора корней"""

    rep: List[int]
    parent: List[Optional[Tuple[int, int]]]
    generators: List[int]


class E8RootSystem:
    """240 корней E8 с таблицами произведений и отражений"""

    def __init__(self):
        self.roots: List[Root] = _generate_roots()
        self.index: Dict[Root, int] = {r: i for i, r in enumerate(self.roots)}
        n = len(self.roots)
        self.prod = [[-_doubled_dot(a, b) // 4 for b in self.roots] for a in self.roots]
        self.height = [_doubled_dot(r, _HEIGHT_WEIGHTS) for r in self.roots]
        # reflect[r][i] - индекс s_r(x_i) = x_i + (x_i.r) r
        self.reflect = []
        for r in range(n):
            R = self.roots[r]
            row = []
            for i in range(n):
                k = self.prod[i][r]
                row.append(i if k == 0 else self.index[tuple(a + k * b for a, b in zip(self.roots[i], R))])
            self.reflect.append(row)
        self.simple_roots = _SIMPLE_ROOTS
        self.lattice = GramLattice(tuple(
            tuple(-_doubled_dot(a, b) // 4 for b in _SIMPLE_ROOTS) for a in _SIMPLE_ROOTS
        ))
        self._to_coefficients = sympy.Matrix([list(r) for r in _SIMPLE_ROOTS]).T.inv()
        self._partitions: Dict[FrozenSet[int], _OrbitPartition] = {}
        logger.debug(f"Модель E8 построена: {n} корней")

    def __len__(self) -> int:
        return len(self.roots)

    def coefficients(self, root: Sequence[int]) -> Tuple[int, ...]:
        """Координаты вектора в базисе простых корней"""
        c = self._to_coefficients * sympy.Matrix(list(root))
        values = []
        for v in c:
            if not v.is_integer:
                raise InvalidInputError(f"Вектор {tuple(root)} не лежит в решетке E8")
            values.append(int(v))
        return tuple(values)

    def partition(self, placed: FrozenSet[int]) -> _OrbitPartition:
        """Орбиты группы, порожденной отражениями в корнях, ортогональных placed"""
        cached = self._partitions.get(placed)
        if cached is not None:
            return cached
        n = len(self.roots)
        prod, height = self.prod, self.height
        perp = [r for r in range(n) if all(prod[r][p] == 0 for p in placed)]
        positive = [r for r in perp if height[r] > 0]
        generators = [
            a for a in positive
            if not any(prod[a][b] == -1 and height[b] < height[a] for b in positive)
        ]
        rep: List[Optional[int]] = [None] * n
        parent: List[Optional[Tuple[int, int]]] = [None] * n
        for start in range(n):
            if rep[start] is not None:
                continue
            rep[start] = start
            queue = [start]
            for x in queue:
                for g in generators:
                    y = self.reflect[g][x]
                    if rep[y] is None:
                        rep[y] = start
                        parent[y] = (x, g)
                        queue.append(y)
        result = _OrbitPartition(rep, parent, generators)
        self._partitions[placed] = result
        return result

    def canonical_tuple(self, tup: Sequence[int]) -> Tuple[int, ...]:
        """
        Канонический представитель W-орбиты упорядоченного набора корней

        На каждом шаге текущий корень переводится в минимальный по индексу
        корень своей орбиты стабилизатора уже приведенного префикса.
        """
        work = list(tup)
        prefix: List[int] = []
        for i in range(len(work)):
            part = self.partition(frozenset(prefix))
            x = work[i]
            while part.parent[x] is not None:
                prev, g = part.parent[x]
                refl = self.reflect[g]
                for j in range(i, len(work)):
                    work[j] = refl[work[j]]
                x = prev
            prefix.append(work[i])
        return tuple(prefix)

    def in_span(self, roots: Sequence[int]) -> List[int]:
        """Корни E8, лежащие в подрешетке, порожденной данными корнями"""
        if not roots:
            return []
        basis = sympy.Matrix([list(self.roots[r]) for r in roots]).T
        gram = basis.T * basis
        gram_inv = gram.inv()
        result = []
        for i, r in enumerate(self.roots):
            coeffs = gram_inv * (basis.T * sympy.Matrix(list(r)))
            if all(c.is_integer for c in coeffs) and basis * coeffs == sympy.Matrix(list(r)):
                result.append(i)
        return result


@lru_cache(maxsize=1)
def get_e8() -> E8RootSystem:
    return E8RootSystem()


def e8_roots() -> List[Root]:
    """240 корней E8 в удвоенных координатах, канонический порядок"""
    return list(get_e8().roots)


def e8_lattice() -> GramLattice:
    """Решетка E8 (отрицательно определенная) в базисе простых корней"""
    return get_e8().lattice


# ---------------------------------------------------------------------------
# Свидетели вложений
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingWitness:
    """Образы простых корней системы корней в модели E8"""

    spec: RootSystemSpec
    roots: Tuple[Root, ...]

    def coordinates(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(v, 2) for v in r) for r in self.roots)

    def coefficients(self) -> Tuple[Tuple[int, ...], ...]:
        e8 = get_e8()
        return tuple(e8.coefficients(r) for r in self.roots)

    def embedding(self) -> SublatticeEmbedding:
        return SublatticeEmbedding(e8_lattice(), self.coefficients())

    def gram(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(-_doubled_dot(a, b) // 4 for b in self.roots) for a in self.roots)

    def is_valid(self) -> bool:
        index = get_e8().index
        return all(r in index for r in self.roots) and self.gram() == self.spec.gram()

    def torsion(self) -> TorsionGroup:
        return quotient_torsion(self.embedding())

    def to_json(self) -> Dict:
        return {
            "spec": format_spec(self.spec),
            "roots": [[_fraction_text(v) for v in row] for row in self.coordinates()],
            "coefficients": [list(c) for c in self.coefficients()],
        }


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ClassificationRow:
    spec: RootSystemSpec
    torsion: TorsionGroup
    classes_up_to_isometry: int

    def to_json(self) -> Dict:
        return {
            "spec": format_spec(self.spec),
            "torsion": list(self.torsion.invariant_factors),
            "classes": self.classes_up_to_isometry,
        }


class EmbeddingSearch:
    """
    Перебор вложений одной системы корней в E8

    Args:
        spec: Система корней
        node_budget: Предел числа узлов дерева орбит
    """

    def __init__(self, spec: RootSystemSpec, node_budget: int = DEFAULT_NODE_BUDGET):
        self.spec = spec
        self.node_budget = node_budget
        self.gram = spec.gram()
        self.e8 = get_e8()
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise SearchBudgetExceeded(
                f"Перебор для {format_spec(self.spec)} превысил бюджет {self.node_budget} узлов"
            )

    def _candidates(self, prefix: Sequence[int]) -> List[int]:
        i = len(prefix)
        prod = self.e8.prod
        row = self.gram[i]
        return [
            r for r in range(len(self.e8))
            if all(prod[r][prefix[j]] == row[j] for j in range(i))
        ]

    def _children(self, prefix: Sequence[int]) -> List[int]:
        part = self.e8.partition(frozenset(prefix))
        return sorted({part.rep[c] for c in self._candidates(prefix)})

    def first(self) -> Optional[Tuple[int, ...]]:
        """Первый найденный набор (по дереву орбит)"""
        k = self.spec.rank

        def dfs(prefix: List[int]) -> Optional[Tuple[int, ...]]:
            self._tick()
            if len(prefix) == k:
                return tuple(prefix)
            for child in self._children(prefix):
                prefix.append(child)
                found = dfs(prefix)
                prefix.pop()
                if found is not None:
                    return found
            return None

        return dfs([])

    def orbit_leaves(self) -> List[Tuple[int, ...]]:
        """Представители всех W-орбит упорядоченных наборов"""
        k = self.spec.rank
        leaves = []

        def dfs(prefix: List[int]) -> None:
            self._tick()
            if len(prefix) == k:
                leaves.append(tuple(prefix))
                return
            for child in self._children(prefix):
                prefix.append(child)
                dfs(prefix)
                prefix.pop()

        dfs([])
        return leaves

    def classes(self) -> List[Tuple[int, ...]]:
        """Представители классов подрешеток с точностью до W(E8)"""
        leaves = self.orbit_leaves()
        position = {leaf: i for i, leaf in enumerate(leaves)}
        parent = list(range(len(leaves)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for perm in self.spec.symmetry_generators():
            for i, leaf in enumerate(leaves):
                image = self.e8.canonical_tuple([leaf[perm[p]] for p in range(len(leaf))])
                j = position[image]
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        reps = sorted({find(i) for i in range(len(leaves))})
        logger.debug(
            f"{format_spec(self.spec)}: {len(leaves)} орбит наборов, {len(reps)} классов"
        )
        return [leaves[i] for i in reps]

    def witness(self, tup: Sequence[int]) -> EmbeddingWitness:
        return EmbeddingWitness(self.spec, tuple(self.e8.roots[r] for r in tup))


def find_embedding(spec: RootSystemSpec,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[EmbeddingWitness]:
    """
    Вложение системы корней в E8

    Returns:
        Свидетель вложения или None после исчерпывающего перебора
    """
    if spec.rank > 8:
        return None
    search = EmbeddingSearch(spec, node_budget)
    found = search.first()
    if found is None:
        logger.info(f"{format_spec(spec)} не вкладывается в E8")
        return None
    return search.witness(found)


def all_embeddings_up_to_isometry(spec: RootSystemSpec,
                                  node_budget: int = DEFAULT_NODE_BUDGET) -> List[EmbeddingWitness]:
    """По одному свидетелю на каждый класс вложений с точностью до Aut(E8)"""
    if spec.rank > 8:
        return []
    search = EmbeddingSearch(spec, node_budget)
    return [search.witness(t) for t in search.classes()]


def witnesses_isometric(w1: EmbeddingWitness, w2: EmbeddingWitness,
                        budget: int = DEFAULT_ISOMETRY_BUDGET) -> bool:
    """
    Переводит ли некоторая изометрия E8 образ w1 в образ w2

    Частичное отображение простых корней w1 в корни подрешетки w2
    наращивается по одному корню; на каждом шаге префикс должен лежать
    в той же W-орбите, что и префикс w1.

    Raises:
        SearchBudgetExceeded: перебор превысил budget узлов
    """
    if w1.spec != w2.spec:
        return False
    e8 = get_e8()
    t1 = [e8.index[r] for r in w1.roots]
    target = e8.canonical_tuple(t1)
    pool = e8.in_span([e8.index[r] for r in w2.roots])
    gram = w1.spec.gram()
    nodes = 0

    def extend(prefix: List[int]) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchBudgetExceeded(f"Проверка изометрии превысила бюджет {budget} узлов")
        i = len(prefix)
        if i == len(t1):
            return True
        for r in pool:
            if all(e8.prod[r][prefix[j]] == gram[i][j] for j in range(i)) and r not in prefix:
                prefix.append(r)
                if e8.canonical_tuple(prefix) == target[:i + 1] and extend(prefix):
                    return True
                prefix.pop()
        return False

    return extend([])


# ---------------------------------------------------------------------------
# Классификация
# ---------------------------------------------------------------------------

_classification_cache: Dict[Optional[int], List[ClassificationRow]] = {}


def classify_all(node_budget: int = DEFAULT_NODE_BUDGET,
                 progress: bool = False) -> List[ClassificationRow]:
    """
    Полный перебор систем корней ранга <= 8 в E8

    Returns:
        Строки (система корней, кручение, число классов с этим кручением)
    """
    if node_budget in _classification_cache:
        return _classification_cache[node_budget]
    specs = candidate_specs(8)
    rows: List[ClassificationRow] = []
    logger.info(f"Классификация: {len(specs)} кандидатов")
    with tqdm(total=len(specs), desc="Classify", ascii=True, ncols=80, disable=not progress) as pbar:
        for spec in specs:
            counts: Dict[Tuple[int, ...], int] = {}
            for w in all_embeddings_up_to_isometry(spec, node_budget):
                factors = w.torsion().invariant_factors
                counts[factors] = counts.get(factors, 0) + 1
            for factors in sorted(counts):
                rows.append(ClassificationRow(spec, TorsionGroup(factors), counts[factors]))
            pbar.update(1)
    logger.info(f"Классификация завершена: {len(rows)} строк")
    _classification_cache[node_budget] = rows
    return rows


def classify_by_predicate(predicate: Callable[[TorsionGroup], bool],
                          node_budget: int = DEFAULT_NODE_BUDGET,
                          progress: bool = False) -> List[ClassificationRow]:
    return [row for row in classify_all(node_budget, progress) if predicate(row.torsion)]


def classify_odd_torsion(node_budget: int = DEFAULT_NODE_BUDGET,
                         progress: bool = False) -> List[ClassificationRow]:
    """Системы корней с нетривиальным кручением нечетного порядка"""
    return classify_by_predicate(
        lambda t: not t.is_trivial and t.order % 2 == 1, node_budget, progress
    )


PREDICATES: Dict[str, Callable[[TorsionGroup], bool]] = {
    "odd": lambda t: not t.is_trivial and t.order % 2 == 1,
    "trivial": lambda t: t.is_trivial,
    "nontrivial": lambda t: not t.is_trivial,
    "2-torsion": lambda t: t.has_torsion(2),
    "3-torsion": lambda t: t.has_torsion(3),
    "2-and-3-torsion": lambda t: t.has_torsion(2) and t.has_torsion(3),
    "false": lambda t: False,
}


def spec_torsion(spec: RootSystemSpec, node_budget: int = DEFAULT_NODE_BUDGET) -> TorsionGroup:
    """
    Кручение E8/spec, общее для всех классов вложений

    Raises:
        NotEmbeddableError: вложения нет
        ToolkitError: классы вложений дают разное кручение
    """
    witnesses = all_embeddings_up_to_isometry(spec, node_budget)
    if not witnesses:
        raise NotEmbeddableError(f"{format_spec(spec)} не вкладывается в E8")
    torsions = {w.torsion() for w in witnesses}
    if len(torsions) > 1:
        raise ToolkitError(
            f"Классы вложений {format_spec(spec)} имеют разное кручение: "
            f"{', '.join(sorted(str(t) for t in torsions))}",
            reason="ambiguous_torsion",
        )
    return torsions.pop()


def dihedral_quotient_count(spec: RootSystemSpec, n: int,
                            node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """
    Число подгрупп Z/n в n-кручении фактора E8/spec

    Args:
        spec: Вкладываемая система корней
        n: Простое число
    """
    if not sympy.isprime(n):
        raise InvalidInputError(f"n = {n} не простое")
    r = spec_torsion(spec, node_budget).rank_at(n)
    return (n ** r - 1) // (n - 1)


def admits_odd_embedding(spec: RootSystemSpec, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Есть ли вложение, при котором E8/spec без 2-кручения"""
    return any(not w.torsion().has_torsion(2)
               for w in all_embeddings_up_to_isometry(spec, node_budget))


def minimal_euler(spec: RootSystemSpec) -> int:
    return spec.minimal_euler()


# ---------------------------------------------------------------------------
# Нечетная унимодулярная решетка сигнатуры (1, 9)
# ---------------------------------------------------------------------------

LEMMA_F = (3, 1, 1, 1, 1, 1, 1, 1, 1, 1)
LEMMA_E0 = (0, 0, 0, 0, 0, 0, 0, 0, 0, -1)


def verify_lemma_e8() -> Dict:
    """
    Сертификат: дополнение span(e0, f) в diag(1, -1^9) изоморфно E8

    Returns:
        Словарь сертификатов; каждая проверка - bool или число
    """
    ambient = GramLattice.diagonal((1,) + (-1,) * 9)
    f, e0 = LEMMA_F, LEMMA_E0
    span = SublatticeEmbedding(ambient, (e0, f))
    complement = orthogonal_complement(span)
    lattice = complement.induced()
    report = {
        "ambient_signature": list(signature(ambient)),
        "ambient_unimodular": is_unimodular(ambient),
        "ambient_odd": not is_even(ambient),
        "e0": list(e0),
        "f": list(f),
        "e0_square": ambient.product(e0, e0),
        "f_square": ambient.product(f, f),
        "e0_dot_f": ambient.product(e0, f),
        "f_characteristic": is_characteristic(ambient, f),
        "span_primitive": is_primitive(span),
        "complement_rank": lattice.rank,
        "complement_even": is_even(lattice),
        "complement_unimodular": is_unimodular(lattice),
        "complement_negative_definite": is_definite(lattice) and signature(lattice)[1] == lattice.rank,
        "complement_discriminant": list(discriminant_group(lattice).invariant_factors),
        "complement_root_count": len(short_vectors(lattice, 2)),
    }
    report["certified"] = (
        report["e0_square"] == -1 and report["f_square"] == 0 and report["e0_dot_f"] == 1
        and report["f_characteristic"] and report["complement_rank"] == 8
        and report["complement_even"] and report["complement_unimodular"]
        and report["complement_negative_definite"] and report["complement_root_count"] == 240
    )
    logger.info(f"Проверка решетки (1,9): сертификат {'получен' if report['certified'] else 'НЕ получен'}")
    return report
