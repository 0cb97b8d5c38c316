"""
Конечно представленные группы и их конечные факторы

Слова свободной группы - кортежи ненулевых целых (k - образующая с
номером k, -k - обратная к ней), всегда свободно редуцированные;
умножение слов - конкатенация слева направо. Монодромии слоев,
локальные представления ван Кампена, абелианизация через форму Смита,
полиномы Александера по исчислению Фокса, перебор гомоморфизмов
в конечные группы и каталог всех групп порядка <= 24.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import sympy
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup
from tqdm import tqdm

from .exceptions import GroupBoundError, InvalidInputError, ToolkitError
from .lattice_core import TorsionGroup, matrix_rank, smith_invariants

logger = logging.getLogger(__name__)

DEFAULT_HOM_ORDER_BOUND = 24
DEFAULT_ISO_ORDER_BOUND = 60
CATALOGUE_MAX_ORDER = 24

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# ---------------------------------------------------------------------------
# Слова и эндоморфизмы
# ---------------------------------------------------------------------------

def _free_reduce(letters: Sequence[int]) -> Tuple[int, ...]:
    stack: List[int] = []
    for x in letters:
        if x == 0:
            raise InvalidInputError("Буква слова не может быть нулевой")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Свободно редуцированное слово"""

    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduce(tuple(int(x) for x in self.letters)))

    @classmethod
    def generator(cls, k: int) -> "Word":
        return cls((k,))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def conjugate_by(self, w: "Word") -> "Word":
        """w^-1 * self * w"""
        return w.inverse() * self * w

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def exponent_sums(self, ngens: int) -> List[int]:
        sums = [0] * ngens
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return sums

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Образ слова при подстановке образующих"""
        result: List[int] = []
        for x in self.letters:
            image = images[abs(x) - 1]
            result.extend(image.letters if x > 0 else image.inverse().letters)
        return Word(tuple(result))

    def text(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return "*".join(names[abs(x) - 1] + ("^-1" if x < 0 else "") for x in self.letters)


def default_names(n: int) -> List[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"x{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class Endomorphism:
    """Эндоморфизм свободной группы: образ каждой образующей"""

    images: Tuple[Word, ...]

    @property
    def ngens(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(tuple(Word.generator(k) for k in range(1, n + 1)))

    def __call__(self, word: Word) -> Word:
        return word.substitute(self.images)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self ∘ other: сначала other, затем self"""
        return Endomorphism(tuple(self(w) for w in other.images))

    @property
    def is_identity(self) -> bool:
        return self.images == Endomorphism.identity(self.ngens).images

    def inverse(self, max_steps: int = 100_000) -> "Endomorphism":
        """
        Обратный автоморфизм редукцией Нильсена

        Пары (v_i, u_i): v_i - слово в образующих, u_i - то же слово,
        выраженное через образы (v_i = u_i(образы)). Преобразования
        Нильсена укорачивают v_i до букв; тогда обратное отображение
        читается из u_i.

        Raises:
            ToolkitError: редукция остановилась (отображение не автоморфизм)
        """
        n = self.ngens
        v = list(self.images)
        u = [Word.generator(k) for k in range(1, n + 1)]
        for _ in range(max_steps):
            if all(len(w) == 1 for w in v):
                break
            best = None
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    for left in (False, True):
                        for sign in (1, -1):
                            vj = v[j] if sign > 0 else v[j].inverse()
                            candidate = vj * v[i] if left else v[i] * vj
                            if len(candidate) < len(v[i]) and (best is None or len(candidate) < best[0]):
                                best = (len(candidate), i, j, left, sign)
            if best is None:
                raise ToolkitError("Редукция Нильсена остановилась: отображение не автоморфизм",
                                   reason="not_automorphism")
            _, i, j, left, sign = best
            vj = v[j] if sign > 0 else v[j].inverse()
            uj = u[j] if sign > 0 else u[j].inverse()
            v[i] = vj * v[i] if left else v[i] * vj
            u[i] = uj * u[i] if left else u[i] * uj
            if v[i].is_identity:
                raise ToolkitError("Образы зависимы: отображение не автоморфизм",
                                   reason="not_automorphism")
        else:
            raise ToolkitError(f"Редукция Нильсена не завершилась за {max_steps} шагов",
                               reason="not_automorphism")
        inverse_images: List[Optional[Word]] = [None] * n
        for vi, ui in zip(v, u):
            letter = vi.letters[0]
            if inverse_images[abs(letter) - 1] is not None:
                raise ToolkitError("Образы не образуют базис", reason="not_automorphism")
            inverse_images[abs(letter) - 1] = ui if letter > 0 else ui.inverse()
        result = Endomorphism(tuple(inverse_images))
        if not self.compose(result).is_identity:
            raise ToolkitError("Обратное отображение не прошло проверку", reason="not_automorphism")
        return result

    def to_json(self, names: Sequence[str] = None) -> Dict:
        names = names or default_names(self.ngens)
        return {
            "generators": list(names),
            "images": {names[k]: w.text(names) for k, w in enumerate(self.images)},
            "letters": [list(w.letters) for w in self.images],
        }


# ---------------------------------------------------------------------------
# Монодромии особых слоев
# ---------------------------------------------------------------------------

_FIBER_ALIASES = {
    "Ã0**": "II", "A0**": "II", "II": "II",
    "Ã1*": "III", "A1*": "III", "III": "III",
    "Ã2*": "IV", "A2*": "IV", "IV": "IV",
}


def product_word(n: int = 3) -> Word:
    """Π = α1 α2 ... αn"""
    return Word(tuple(range(1, n + 1)))


def monodromy(fiber_type: str) -> Endomorphism:
    """
    Локальная монодромия слоя типа Ã0** (II), Ã1* (III) или Ã2* (IV)

    Сопряжение x y x^-1 из классической записи реализовано словом
    x^-1 y x (умножение слева направо); при этом все три монодромии -
    автоморфизмы, сохраняющие Π = α1 α2 α3.

    Raises:
        InvalidInputError: неподдерживаемый тип
    """
    kind = _FIBER_ALIASES.get(fiber_type.strip())
    if kind is None:
        raise InvalidInputError(f"Монодромия для слоя '{fiber_type}' не поддерживается")
    a1, a2, a3 = (Word.generator(k) for k in (1, 2, 3))
    pi = product_word(3)
    if kind == "II":
        images = (a2, a3, a1.conjugate_by(pi))
    elif kind == "III":
        images = (a3, a2.conjugate_by(a3), a1.conjugate_by(pi))
    else:
        images = (a3, a1.conjugate_by(pi), a2.conjugate_by(pi))
    return Endomorphism(images)


# ---------------------------------------------------------------------------
# Представления
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: Tuple[Word, ...] = ()
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.ngens < 0:
            raise InvalidInputError("Число образующих отрицательно")
        names = tuple(self.names) or tuple(default_names(self.ngens))
        if len(names) != self.ngens:
            raise InvalidInputError("Число имен не совпадает с числом образующих")
        relators = tuple(r for r in (Word(tuple(r.letters)) for r in self.relators) if not r.is_identity)
        for r in relators:
            if r.max_generator() > self.ngens:
                raise InvalidInputError(f"Соотношение использует несуществующую образующую: {r.letters}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "relators", relators)

    def text(self) -> str:
        rels = ", ".join(r.text(self.names) for r in self.relators)
        return f"<{', '.join(self.names)} | {rels}>"

    def exponent_matrix(self) -> List[List[int]]:
        return [r.exponent_sums(self.ngens) for r in self.relators]

    def to_json(self) -> Dict:
        return {
            "generators": list(self.names),
            "relators": [list(r.letters) for r in self.relators],
            "text": self.text(),
        }

    @classmethod
    def from_json(cls, data: Dict) -> "Presentation":
        names = tuple(data.get("generators", ()))
        return cls(len(names), tuple(Word(tuple(r)) for r in data.get("relators", ())), names)


def local_presentation(fiber) -> Presentation:
    """<α1, α2, α3 | m(αi) αi^-1> для типа слоя или заданного эндоморфизма"""
    m = fiber if isinstance(fiber, Endomorphism) else monodromy(fiber)
    relators = tuple(m(Word.generator(k)) * Word.generator(k).inverse()
                     for k in range(1, m.ngens + 1))
    return Presentation(m.ngens, relators)


def free_presentation(n: int) -> Presentation:
    return Presentation(n, ())


def braid_presentation() -> Presentation:
    """B3 = <a, b | aba = bab>"""
    a, b = Word.generator(1), Word.generator(2)
    return Presentation(2, ((a * b * a) * (b * a * b).inverse(),))


def reduced_braid_presentation() -> Presentation:
    """B3/Δ^2 = <a, b | aba = bab, (ab)^3>"""
    a, b = Word.generator(1), Word.generator(2)
    return Presentation(2, ((a * b * a) * (b * a * b).inverse(), (a * b) ** 3))


def three_generator_presentation() -> Presentation:
    """<a, b, c | aba = bab, bcb = cbc, a b c b^-1 a = b c b^-1 a b c b^-1>"""
    a, b, c = (Word.generator(k) for k in (1, 2, 3))
    bi = b.inverse()
    return Presentation(3, (
        (a * b * a) * (b * a * b).inverse(),
        (b * c * b) * (c * b * c).inverse(),
        (a * b * c * bi * a) * (b * c * bi * a * b * c * bi).inverse(),
    ))


class _WordParser:
    """Разбор слов: имена образующих, скобки, степени ^n и ^-1, '*'"""

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.pos = 0
        self.names = sorted(names, key=len, reverse=True)
        self.index = {name: k + 1 for k, name in enumerate(names)}

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t*·":
            self.pos += 1

    def _error(self, message: str) -> InvalidInputError:
        return InvalidInputError(f"{message} в позиции {self.pos}: '{self.text}'")

    def parse(self) -> Word:
        word = self._sequence()
        self._skip()
        if self.pos != len(self.text):
            raise self._error("Неожиданный символ")
        return word

    def _sequence(self) -> Word:
        result = Word()
        while True:
            self._skip()
            if self.pos >= len(self.text) or self.text[self.pos] == ")":
                return result
            result = result * self._factor()

    def _factor(self) -> Word:
        if self.text[self.pos] == "(":
            self.pos += 1
            base = self._sequence()
            if self.pos >= len(self.text) or self.text[self.pos] != ")":
                raise self._error("Не закрыта скобка")
            self.pos += 1
        else:
            for name in self.names:
                if self.text.startswith(name, self.pos):
                    base = Word.generator(self.index[name])
                    self.pos += len(name)
                    break
            else:
                raise self._error("Неизвестная образующая")
        self._skip()
        if self.pos < len(self.text) and self.text[self.pos] == "^":
            match = re.match(r"\^\s*(-?\d+)", self.text[self.pos:])
            if not match:
                raise self._error("Некорректная степень")
            self.pos += match.end()
            return base ** int(match.group(1))
        return base


def parse_word(text: str, names: Sequence[str]) -> Word:
    return _WordParser(text, names).parse()


def parse_presentation(text) -> Presentation:
    """
    Разбор представления "<a, b | aba = bab, (ab)^3>"

    Угловые скобки необязательны; соотношение l = r превращается в l r^-1.
    Принимается и JSON-словарь {"generators": [...], "relators": [[...], ...]}.

    Raises:
        InvalidInputError: синтаксическая ошибка
    """
    if isinstance(text, dict):
        return Presentation.from_json(text)
    body = text.strip()
    for left, right in (("<", ">"), ("⟨", "⟩")):
        if body.startswith(left) and body.endswith(right):
            body = body[1:-1]
    gens_part, _, rels_part = body.partition("|")
    names = [n.strip() for n in gens_part.split(",") if n.strip()]
    for name in names:
        if not _IDENTIFIER.match(name):
            raise InvalidInputError(f"Недопустимое имя образующей '{name}'")
    if len(set(names)) != len(names):
        raise InvalidInputError("Имена образующих повторяются")
    relators = []
    for chunk in re.split(r"[,;]", rels_part):
        chunk = chunk.strip()
        if not chunk:
            continue
        sides = chunk.split("=")
        if len(sides) > 2:
            raise InvalidInputError(f"Лишний знак '=' в '{chunk}'")
        word = parse_word(sides[0], names)
        if len(sides) == 2:
            word = word * parse_word(sides[1], names).inverse()
        relators.append(word)
    return Presentation(len(names), tuple(relators), tuple(names))


def abelianization(p: Presentation) -> Tuple[int, TorsionGroup]:
    """
    Абелианизация: (свободный ранг, кручение) по форме Смита матрицы
    сумм показателей
    """
    if p.ngens == 0:
        return 0, TorsionGroup()
    relations = p.exponent_matrix()
    invariants = smith_invariants(relations, ncols=p.ngens)
    free = p.ngens - matrix_rank(relations, ncols=p.ngens)
    return free, TorsionGroup(tuple(d for d in invariants if d > 1))


# ---------------------------------------------------------------------------
# Полином Александера
# ---------------------------------------------------------------------------

_T = sympy.Symbol("t")


@dataclass(frozen=True)
class LaurentPoly:
    """Целочисленный многочлен от t, нормированный: младшая степень 0, старший коэффициент > 0"""

    coeffs: Tuple[int, ...]

    @classmethod
    def normalized(cls, expr) -> "LaurentPoly":
        expr = sympy.expand(expr)
        if expr == 0:
            return cls(())
        poly = sympy.Poly(expr, _T)
        coeffs = [int(c) for c in reversed(poly.all_coeffs())]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        return cls(tuple(coeffs))

    def expr(self):
        return sum((c * _T ** k for k, c in enumerate(self.coeffs)), sympy.Integer(0))

    def text(self) -> str:
        return sympy.sstr(sympy.factor(self.expr())) if self.coeffs else "0"

    def to_json(self) -> Dict:
        return {"coeffs": list(self.coeffs), "text": self.text()}


def fox_jacobian(p: Presentation) -> List[List]:
    """
    Матрица Фокса (строки - соотношения) после аугментации образующих в t

    Для буквы x_j^+1 с предшествующей суммой показателей s вклад t^s,
    для x_j^-1 - вклад -t^(s - 1). Каждая строка домножена на степень t
    так, что младший показатель равен 0; миноры меняются на единицу.
    """
    rows = []
    for r in p.relators:
        terms: List[Dict[int, int]] = [{} for _ in range(p.ngens)]
        s = 0
        for x in r.letters:
            j = abs(x) - 1
            if x > 0:
                terms[j][s] = terms[j].get(s, 0) + 1
                s += 1
            else:
                s -= 1
                terms[j][s] = terms[j].get(s, 0) - 1
        low = min((e for entry in terms for e, c in entry.items() if c), default=0)
        rows.append([sum((c * _T ** (e - low) for e, c in entry.items()), sympy.Integer(0))
                     for entry in terms])
    return rows


def fox_alexander(p: Presentation) -> LaurentPoly:
    """
    Полином Александера: НОД миноров порядка n - 1 матрицы Фокса

    Raises:
        InvalidInputError: аугментация (все образующие в 1) не является
            гомоморфизмом в Z
    """
    for r in p.relators:
        if sum(r.exponent_sums(p.ngens)) != 0:
            raise InvalidInputError(f"Соотношение {r.text(p.names)} имеет ненулевую сумму показателей")
    n = p.ngens
    if n <= 1:
        return LaurentPoly((1,))
    rows = fox_jacobian(p)
    if len(rows) < n - 1:
        return LaurentPoly(())
    result = sympy.Integer(0)
    for rs in combinations(range(len(rows)), n - 1):
        for cs in combinations(range(n), n - 1):
            minor = sympy.Matrix([[rows[i][j] for j in cs] for i in rs]).det(method="berkowitz")
            minor = sympy.expand(minor)
            if minor != 0:
                result = minor if result == 0 else sympy.gcd(result, minor)
    return LaurentPoly.normalized(result)


# ---------------------------------------------------------------------------
# Конечные группы
# ---------------------------------------------------------------------------

class FiniteGroup:
    """
    Конечная группа, заданная таблицей умножения

    Элементы - индексы 0..n-1, единица - 0. Таблица проверяется при
    построении (единица, обратимость, ассоциативность).

    Args:
        name: Обозначение группы
        table: table[i][j] - индекс произведения i * j
        generators: Отмеченные образующие
        elements: Исходные объекты элементов (перестановки, матрицы и т.п.)
    """

    def __init__(self, name: str, table: Sequence[Sequence[int]], generators: Sequence[int],
                 elements: Sequence[Hashable] = None, verify: bool = True):
        self.name = name
        self.table = [list(row) for row in table]
        self.order = len(self.table)
        self.generators = list(generators)
        self.elements = list(elements) if elements is not None else list(range(self.order))
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.inverses = [row.index(0) if 0 in row else -1 for row in self.table]
        if verify:
            self._verify()
        self._invariants = None
        self._small_generators = None

    def _verify(self) -> None:
        n = self.order
        rng = range(n)
        for i in rng:
            if self.table[0][i] != i or self.table[i][0] != i:
                raise ToolkitError(f"{self.name}: элемент 0 не является единицей", reason="invalid_group")
            if sorted(self.table[i]) != list(rng):
                raise ToolkitError(f"{self.name}: строка {i} не перестановка", reason="invalid_group")
        t = self.table
        for a in rng:
            ta = t[a]
            for b in rng:
                ab = ta[b]
                tb = t[b]
                tab = t[ab]
                for c in rng:
                    if tab[c] != ta[tb[c]]:
                        raise ToolkitError(f"{self.name}: нарушена ассоциативность", reason="invalid_group")
        if self.subgroup(self.generators) != set(rng):
            raise ToolkitError(f"{self.name}: отмеченные элементы не порождают группу",
                               reason="invalid_group")

    @classmethod
    def from_generators(cls, name: str, generators: Sequence[Hashable],
                        multiply: Callable[[Hashable, Hashable], Hashable],
                        identity: Hashable) -> "FiniteGroup":
        """Замыкание порождающих элементов и таблица умножения"""
        elements = [identity]
        index = {identity: 0}
        for x in elements:
            for g in generators:
                y = multiply(x, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
            if len(elements) > 10_000:
                raise GroupBoundError(f"{name}: замыкание превысило 10000 элементов")
        table = [[index[multiply(x, y)] for y in elements] for x in elements]
        return cls(name, table, [index[g] for g in generators], elements)

    def index_of(self, element: Hashable) -> int:
        return self._index[element]

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        base = a if k >= 0 else self.inverses[a]
        result = 0
        for _ in range(abs(k)):
            result = self.table[result][base]
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def subgroup(self, elements: Sequence[int]) -> set:
        seen = {0}
        queue = [0]
        for x in queue:
            for g in elements:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def generates(self, elements: Sequence[int]) -> bool:
        return len(self.subgroup(elements)) == self.order

    def evaluate(self, word: Word, images: Sequence[int]) -> int:
        result = 0
        t, inv = self.table, self.inverses
        for x in word.letters:
            result = t[result][images[x - 1] if x > 0 else inv[images[-x - 1]]]
        return result

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.generators for b in self.generators)

    def center_size(self) -> int:
        t = self.table
        return sum(1 for z in range(self.order) if all(t[z][g] == t[g][z] for g in self.generators))

    def derived_size(self) -> int:
        t, inv = self.table, self.inverses
        commutators = {t[t[inv[a]][inv[b]]][t[a][b]] for a in range(self.order) for b in range(self.order)}
        return len(self.subgroup(sorted(commutators)))

    def invariants(self) -> Tuple:
        """Порядок, профиль порядков элементов, центр, коммутант"""
        if self._invariants is None:
            profile = tuple(sorted(self.element_order(a) for a in range(self.order)))
            self._invariants = (self.order, self.is_abelian, profile,
                                self.center_size(), self.derived_size())
        return self._invariants

    def small_generators(self) -> List[int]:
        """Жадно подобранный короткий порождающий набор"""
        if self._small_generators is None:
            chosen: List[int] = []
            current = {0}
            while len(current) < self.order:
                best, best_size = None, -1
                for g in range(self.order):
                    if g in current:
                        continue
                    size = len(self.subgroup(chosen + [g]))
                    if size > best_size:
                        best, best_size = g, size
                chosen.append(best)
                current = self.subgroup(chosen)
            self._small_generators = chosen
        return self._small_generators

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidInputError(f"Порядок циклической группы {n} < 1")
    if n == 1:
        return FiniteGroup("C1", [[0]], [], [0])
    return FiniteGroup.from_generators(f"C{n}", [1], lambda a, b: (a + b) % n, 0)


def dihedral(n: int) -> FiniteGroup:
    """Группа симметрий правильного n-угольника, порядок 2n"""
    if n < 1:
        raise InvalidInputError(f"n = {n} < 1")

    def mul(x, y):
        (r1, s1), (r2, s2) = x, y
        return ((r1 + (r2 if s1 == 0 else -r2)) % n, (s1 + s2) % 2)

    return FiniteGroup.from_generators(f"D{2 * n}", [(1 % n, 0), (0, 1)], mul, (0, 0))


def _permutation_group(name: str, generators: Sequence[Permutation]) -> FiniteGroup:
    degree = generators[0].size
    return FiniteGroup.from_generators(name, list(generators), lambda p, q: p * q, Permutation(degree - 1))


def symmetric3() -> FiniteGroup:
    return _permutation_group("S3", SymmetricGroup(3).generators)


def symmetric4() -> FiniteGroup:
    return _permutation_group("S4", SymmetricGroup(4).generators)


def alternating4() -> FiniteGroup:
    return _permutation_group("A4", AlternatingGroup(4).generators)


def special_linear_2_3() -> FiniteGroup:
    """SL(2, 3) - матрицы 2x2 над F3 с определителем 1"""

    def mul(A, B):
        a, b, c, d = A
        e, f, g, h = B
        return ((a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3)

    return FiniteGroup.from_generators("SL(2,3)", [(1, 1, 0, 1), (0, 2, 1, 0)], mul, (1, 0, 0, 1))


def metacyclic(m: int, k: int, r: int, s: int, name: str = None) -> FiniteGroup:
    """
    <x, y | x^m, y^k = x^s, y x y^-1 = x^r>, элементы x^i y^j

    Требуется r^k = 1 и s (r - 1) = 0 по модулю m.
    """
    if pow(r, k, m) != 1 % m or (s * (r - 1)) % m:
        raise InvalidInputError(f"Недопустимые параметры метациклической группы ({m}, {k}, {r}, {s})")

    def mul(u, v):
        (i, j), (p, q) = u, v
        i2, j2 = i + p * pow(r, j, m), j + q
        if j2 >= k:
            i2, j2 = i2 + s, j2 - k
        return (i2 % m, j2)

    return FiniteGroup.from_generators(name or f"M({m},{k},{r},{s})", [(1 % m, 0), (0, 1 % k)], mul, (0, 0))


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = None) -> FiniteGroup:
    gens = [(g, 0) for g in G.generators] + [(0, h) for h in H.generators]
    return FiniteGroup.from_generators(
        name or f"{G.name}x{H.name}", gens,
        lambda x, y: (G.table[x[0]][y[0]], H.table[x[1]][y[1]]), (0, 0),
    )


def abelian(factors: Sequence[int]) -> FiniteGroup:
    factors = [d for d in factors if d > 1]
    if not factors:
        return cyclic(1)
    group = cyclic(factors[0])
    for d in factors[1:]:
        group = direct_product(group, cyclic(d))
    return group


def _extend_map(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int],
                images: Sequence[int]) -> Optional[Dict[int, int]]:
    """Продолжение g_i -> h_i до гомоморфизма подгруппы <gens> (None при конфликте)"""
    mapping = {0: 0}
    queue = [0]
    for x in queue:
        for g, h in zip(gens, images):
            y = G.table[x][g]
            value = H.table[mapping[x]][h]
            known = mapping.get(y)
            if known is None:
                mapping[y] = value
                queue.append(y)
            elif known != value:
                return None
    return mapping


def semidirect_product(N: FiniteGroup, k: int, automorphism: Sequence[int], name: str = None) -> FiniteGroup:
    """
    N ⋊ Z/k, образующая Z/k действует автоморфизмом φ

    Args:
        automorphism: Образы отмеченных образующих N (индексы элементов N)

    Raises:
        InvalidInputError: φ не автоморфизм или φ^k != id
    """
    phi = _extend_map(N, N, N.generators, automorphism)
    if phi is None or len(phi) != N.order or len(set(phi.values())) != N.order:
        raise InvalidInputError(f"Отображение не является автоморфизмом {N.name}")
    powers = [list(range(N.order))]
    for _ in range(1, k + 1):
        powers.append([phi[x] for x in powers[-1]])
    if powers[k] != powers[0]:
        raise InvalidInputError(f"φ^{k} != id для {N.name}")

    def mul(u, v):
        (n1, i1), (n2, i2) = u, v
        return (N.table[n1][powers[i1][n2]], (i1 + i2) % k)

    gens = [(g, 0) for g in N.generators] + [(0, 1 % k)]
    return FiniteGroup.from_generators(name or f"{N.name}:C{k}", gens, mul, (0, 0))


def semidirect_cyclic(m: int, k: int, a: int, name: str = None) -> FiniteGroup:
    """Z/m ⋊ Z/k, образующая Z/k действует умножением на a"""
    N = cyclic(m)
    return semidirect_product(N, k, [N.index_of(a % m)] if m > 1 else [],
                              name or f"C{m}:C{k}({a % m})")


def is_isomorphic_small(G: FiniteGroup, H: FiniteGroup,
                        order_bound: int = DEFAULT_ISO_ORDER_BOUND) -> bool:
    """
    Изоморфизм малых групп: сравнение инвариантов, затем перебор образов
    порождающих с продолжением до гомоморфизма

    Raises:
        GroupBoundError: порядок больше order_bound
    """
    if max(G.order, H.order) > order_bound:
        raise GroupBoundError(f"Порядок {max(G.order, H.order)} превышает границу {order_bound}")
    if G.invariants() != H.invariants():
        return False
    gens = G.small_generators()
    orders = [G.element_order(g) for g in gens]
    candidates = [[h for h in range(H.order) if H.element_order(h) == o] for o in orders]

    def search(i: int, images: List[int]) -> bool:
        mapping = _extend_map(G, H, gens[:i], images)
        if mapping is None or len(set(mapping.values())) != len(mapping):
            return False
        if i == len(gens):
            return len(mapping) == G.order
        for h in candidates[i]:
            images.append(h)
            if search(i + 1, images):
                return True
            images.pop()
        return False

    return search(0, [])


# ---------------------------------------------------------------------------
# Каталог групп порядка <= 24
# ---------------------------------------------------------------------------

def _abelian_types(n: int) -> List[Tuple[int, ...]]:
    """Инвариантные множители всех абелевых групп порядка n"""
    result = []

    def partitions(k: int, largest: int) -> List[List[int]]:
        if k == 0:
            return [[]]
        out = []
        for part in range(min(k, largest), 0, -1):
            for rest in partitions(k - part, part):
                out.append([part] + rest)
        return out

    factors = sympy.factorint(n)
    per_prime = [[(p, part) for part in partitions(k, k)] for p, k in sorted(factors.items())]

    def combine(i: int, chosen: List[Tuple[int, List[int]]]) -> None:
        if i == len(per_prime):
            width = max((len(parts) for _, parts in chosen), default=0)
            invariants = []
            for slot in range(width):
                d = 1
                for p, parts in chosen:
                    if slot < len(parts):
                        d *= p ** parts[slot]
                invariants.append(d)
            result.append(tuple(sorted(invariants)))
            return
        for option in per_prime[i]:
            combine(i + 1, chosen + [option])

    combine(0, [])
    return sorted(result, key=lambda t: (len(t), t))


def _abelian_name(factors: Tuple[int, ...]) -> str:
    return "x".join(f"C{d}" for d in factors) if factors else "C1"


def _nonabelian(n: int) -> List[FiniteGroup]:
    """Неабелевы группы порядка n <= 24"""
    Q8 = lambda: metacyclic(4, 2, 3, 2, "Q8")
    D8 = lambda: dihedral(4)
    dic12 = lambda: metacyclic(3, 4, 2, 0, "Dic12")
    builders: Dict[int, List[Callable[[], FiniteGroup]]] = {
        6: [symmetric3],
        8: [D8, Q8],
        10: [lambda: dihedral(5)],
        12: [lambda: dihedral(6), dic12, alternating4],
        14: [lambda: dihedral(7)],
        16: [
            lambda: dihedral(8),
            lambda: metacyclic(8, 2, 7, 4, "Q16"),
            lambda: metacyclic(8, 2, 3, 0, "SD16"),
            lambda: metacyclic(8, 2, 5, 0, "M16"),
            lambda: metacyclic(4, 4, 3, 0, "C4:C4"),
            lambda: direct_product(cyclic(2), D8(), "C2xD8"),
            lambda: direct_product(cyclic(2), Q8(), "C2xQ8"),
            lambda: _c4c2_extension("(C4xC2):C2", pauli=False),
            lambda: _c4c2_extension("Pauli", pauli=True),
        ],
        18: [
            lambda: dihedral(9),
            lambda: direct_product(cyclic(3), symmetric3(), "C3xS3"),
            lambda: _generalized_dihedral_9(),
        ],
        20: [
            lambda: dihedral(10),
            lambda: metacyclic(5, 4, 4, 0, "Dic20"),
            lambda: metacyclic(5, 4, 2, 0, "F20"),
        ],
        21: [lambda: metacyclic(7, 3, 2, 0, "C7:C3")],
        22: [lambda: dihedral(11)],
        24: [
            lambda: metacyclic(3, 8, 2, 0, "C3:C8"),
            special_linear_2_3,
            lambda: metacyclic(12, 2, 11, 6, "Dic24"),
            lambda: direct_product(cyclic(4), symmetric3(), "C4xS3"),
            lambda: dihedral(12),
            lambda: direct_product(cyclic(2), dic12(), "C2xDic12"),
            lambda: _c3_d8(),
            lambda: direct_product(cyclic(3), D8(), "C3xD8"),
            lambda: direct_product(cyclic(3), Q8(), "C3xQ8"),
            symmetric4,
            lambda: direct_product(cyclic(2), alternating4(), "C2xA4"),
            lambda: direct_product(cyclic(2), dihedral(6), "C2xC2xS3"),
        ],
    }
    return [build() for build in builders.get(n, [])]


def _c4c2_extension(name: str, pauli: bool) -> FiniteGroup:
    """(C4 x C2) ⋊ C2: c a c = ab (SmallGroup(16,3)) или c b c = a^2 b (группа Паули)"""
    N = direct_product(cyclic(4), cyclic(2))
    a, b = N.generators
    if pauli:
        images = [a, N.mul(N.power(a, 2), b)]
    else:
        images = [N.mul(a, b), b]
    return semidirect_product(N, 2, images, name)


def _generalized_dihedral_9() -> FiniteGroup:
    """(C3 x C3) ⋊ C2 с действием инверсией"""
    N = abelian((3, 3))
    return semidirect_product(N, 2, [N.inverse(g) for g in N.generators], "(C3xC3):C2")


def _c3_d8() -> FiniteGroup:
    """C3 ⋊ D8 = Dic12 ⋊ C2: z -> z, r -> r^-1"""
    N = metacyclic(3, 4, 2, 0, "Dic12")
    z, r = N.generators
    return semidirect_product(N, 2, [z, N.inverse(r)], "C3:D8")


@lru_cache(maxsize=None)
def small_groups(max_order: int = CATALOGUE_MAX_ORDER) -> Tuple[FiniteGroup, ...]:
    """
    Каталог всех групп порядка <= max_order (не более 24), по порядку:
    сначала абелевы, затем неабелевы

    Raises:
        GroupBoundError: max_order больше 24
    """
    if max_order > CATALOGUE_MAX_ORDER:
        raise GroupBoundError(f"Каталог содержит группы порядка <= {CATALOGUE_MAX_ORDER}")
    groups = []
    for n in range(1, max_order + 1):
        for factors in _abelian_types(n):
            group = abelian(factors)
            group.name = _abelian_name(factors)
            groups.append(group)
        groups.extend(_nonabelian(n))
    logger.debug(f"Каталог групп порядка <= {max_order}: {len(groups)} групп")
    return tuple(groups)


# ---------------------------------------------------------------------------
# Гомоморфизмы
# ---------------------------------------------------------------------------

def enumerate_homs(p: Presentation, G: FiniteGroup,
                   order_bound: int = DEFAULT_HOM_ORDER_BOUND) -> List[Tuple[int, ...]]:
    """
    Все гомоморфизмы группы p в G (образы образующих)

    Перебор с отсечением: соотношение проверяется, как только назначены
    все его образующие.

    Raises:
        GroupBoundError: |G| больше order_bound
    """
    if G.order > order_bound:
        raise GroupBoundError(f"|{G.name}| = {G.order} превышает границу {order_bound}")
    n = p.ngens
    by_level: List[List[Word]] = [[] for _ in range(n + 1)]
    for r in p.relators:
        by_level[r.max_generator()].append(r)
    results: List[Tuple[int, ...]] = []
    images: List[int] = []

    def dfs(level: int) -> None:
        for r in by_level[level]:
            if G.evaluate(r, images) != 0:
                return
        if level == n:
            results.append(tuple(images))
            return
        for g in range(G.order):
            images.append(g)
            dfs(level + 1)
            images.pop()

    dfs(0)
    return results


def hom_count(p: Presentation, G: FiniteGroup, order_bound: int = DEFAULT_HOM_ORDER_BOUND) -> int:
    return len(enumerate_homs(p, G, order_bound))


def epimorphism_exists(p: Presentation, G: FiniteGroup,
                       order_bound: int = DEFAULT_HOM_ORDER_BOUND) -> bool:
    return any(G.generates(images) for images in enumerate_homs(p, G, order_bound))


def image_is_abelian(G: FiniteGroup, images: Sequence[int]) -> bool:
    t = G.table
    return all(t[a][b] == t[b][a] for a in images for b in images)


def local_images_abelian(fiber_type: str, groups: Sequence[FiniteGroup],
                         order_bound: int = DEFAULT_HOM_ORDER_BOUND) -> bool:
    """
    Абелев ли образ каждого гомоморфизма локальной группы слоя в группы groups

    Локальная группа окрестности слоя отображается на всю группу
    дополнения, поэтому False означает, что слой совместим с
    неабелевым фактором из groups.
    """
    p = local_presentation(fiber_type)
    for G in groups:
        for images in enumerate_homs(p, G, order_bound):
            if not image_is_abelian(G, images):
                logger.debug(f"Слой {fiber_type}: неабелев образ в {G.name}")
                return False
    return True


def hom_count_spectrum(p: Presentation, order_bound: int = DEFAULT_HOM_ORDER_BOUND,
                       progress: bool = False) -> Dict[str, int]:
    """
    Число гомоморфизмов в каждую группу каталога порядка <= order_bound

    Returns:
        Словарь "имя группы" -> число гомоморфизмов в порядке каталога
    """
    groups = small_groups(min(order_bound, CATALOGUE_MAX_ORDER))
    if order_bound > CATALOGUE_MAX_ORDER:
        raise GroupBoundError(f"Спектр считается для групп порядка <= {CATALOGUE_MAX_ORDER}")
    spectrum: Dict[str, int] = {}
    with tqdm(total=len(groups), desc="Homs", ascii=True, ncols=80, disable=not progress) as pbar:
        for G in groups:
            spectrum[G.name] = hom_count(p, G, order_bound)
            pbar.update(1)
    return spectrum


NAMED_GROUPS: Dict[str, Callable[[], FiniteGroup]] = {
    "S3": symmetric3,
    "S4": symmetric4,
    "A4": alternating4,
    "SL(2,3)": special_linear_2_3,
}


def parse_group(text: str) -> FiniteGroup:
    """
    Группа по обозначению: Cn, Dn (порядок n), S3, S4, A4, SL(2,3),
    произведения через 'x', имя из каталога, "Cm:Ck(a)"

    Raises:
        InvalidInputError: неизвестное обозначение
    """
    name = text.strip()
    if name in NAMED_GROUPS:
        return NAMED_GROUPS[name]()
    match = re.match(r"^C(\d+):C(\d+)\((-?\d+)\)$", name)
    if match:
        return semidirect_cyclic(int(match.group(1)), int(match.group(2)), int(match.group(3)))
    match = re.match(r"^C(\d+)$", name)
    if match:
        return cyclic(int(match.group(1)))
    match = re.match(r"^D(\d+)$", name)
    if match and int(match.group(1)) % 2 == 0:
        return dihedral(int(match.group(1)) // 2)
    for group in small_groups():
        if group.name == name:
            return group
    if "x" in name:
        parts = [parse_group(part) for part in name.split("x")]
        result = parts[0]
        for part in parts[1:]:
            result = direct_product(result, part)
        return result
    raise InvalidInputError(f"Неизвестная группа '{text}'")
