"""
Командная строка: все операции пакета с JSON на выходе

Формат вывода: {"status": "ok" | "error", "payload": ..., "diagnostics": [...]},
ключи отсортированы. Коды выхода: 0 - успех, 1 - ошибка предметной
области, 2 - ошибка использования.
"""

import argparse
import copy
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import yaml

from . import __version__
from .algebra import ascending, fraction_text
from .exceptions import InvalidInputError, NonMinimalFiberError, ToolkitError
from .fp_groups import (
    abelianization,
    braid_presentation,
    enumerate_homs,
    epimorphism_exists,
    fox_alexander,
    hom_count_spectrum,
    image_is_abelian,
    is_isomorphic_small,
    local_presentation,
    monodromy,
    parse_group,
    parse_presentation,
    product_word,
    reduced_braid_presentation,
    three_generator_presentation,
)
from .lattice_core import GramLattice, determinant, discriminant_group, integer_matrix, smith_normal_form
from .reports import report_tables, to_dataframe
from .root_embeddings import (
    PREDICATES,
    cartan_gram,
    classify_by_predicate,
    classify_odd_torsion,
    dihedral_quotient_count,
    find_embedding,
    format_spec,
    parse_spec,
    verify_lemma_e8,
)
from .torus_detector import (
    TorusStructure,
    compose_torus,
    detect_torus,
    expected_torus_count,
    inner_outer_split,
    newton_divisibility_check,
    verify_torus,
)
from .trigonal_geometry import (
    EULER_BUDGET,
    FiberLocation,
    associated_cubic,
    associated_quartic,
    classify_singular_points,
    curve_components,
    degenerate_family,
    discriminant,
    genus,
    local_intersection_index,
    parse_curve,
    reduce,
    resultant_valuation,
    sextic_singularities,
    sigma_from_fibers,
    sigma_from_points,
    singular_fibers,
)

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"

DEFAULT_CONFIG: Dict = {
    "search": {"node_budget": 200_000, "isometry_budget": 50_000},
    "groups": {"hom_order_bound": 24, "iso_order_bound": 60},
    "output": {"format": "json", "progress": False},
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file": None,
    },
}

# Переменные окружения имеют приоритет над файлом
ENV_OVERRIDES = {
    "SEXTIC_NODE_BUDGET": ("search", "node_budget", int),
    "SEXTIC_ISOMETRY_BUDGET": ("search", "isometry_budget", int),
    "SEXTIC_HOM_ORDER_BOUND": ("groups", "hom_order_bound", int),
    "SEXTIC_LOG_LEVEL": ("logging", "level", str),
}


class UsageError(Exception):
    """Ошибка использования командной строки (код выхода 2)"""


def load_config(path: Optional[str] = None) -> Dict:
    """
    Загрузка конфигурации

    Порядок: явный путь, config/toolkit_config.yaml, пример
    config/toolkit_config.example.yaml, встроенные значения. Секции файла
    накладываются на значения по умолчанию.

    Args:
        path: Явный путь к YAML

    Returns:
        Словарь с конфигурацией

    Raises:
        FileNotFoundError: явно указанный файл не найден
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        source = Path(path)
        if not source.exists():
            raise FileNotFoundError(
                f"Конфигурация не найдена: {path}\n"
                "Создайте файл по образцу:\n"
                "  - config/toolkit_config.example.yaml\n"
                "или запустите без --config (будут взяты значения по умолчанию)"
            )
    else:
        candidates = [CONFIG_DIR / "toolkit_config.yaml", CONFIG_DIR / "toolkit_config.example.yaml"]
        source = next((p for p in candidates if p.exists()), None)

    if source is not None:
        with open(source, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ToolkitError(f"Файл {source} не содержит словарь настроек", reason="invalid_config")
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(config.get(section), dict):
                config[section].update(values)
            else:
                config[section] = values

    for variable, (section, key, cast) in ENV_OVERRIDES.items():
        value = os.getenv(variable)
        if value:
            try:
                config[section][key] = cast(value)
            except ValueError:
                raise ToolkitError(f"{variable}={value!r}: ожидалось {cast.__name__}", reason="invalid_config")
    return config


def setup_logging(config: Dict) -> None:
    """
    Настройка логирования

    Args:
        config: Конфигурация
    """
    log_config = config.get("logging", {})
    log_level = str(log_config.get("level", "WARNING")).upper()
    log_format = log_config.get("format", DEFAULT_CONFIG["logging"]["format"])

    # stdout занят JSON, поэтому лог идет в stderr
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_config.get("file"):
        log_dir = Path("logs")
        log_dir.mkdir(exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / log_config["file"], encoding="utf-8"))

    logging.basicConfig(
        level=getattr(logging, log_level, logging.WARNING),
        format=log_format,
        handlers=handlers,
        force=True,
    )


@dataclass
class CommandResult:
    status: str
    payload: object
    diagnostics: List[str] = field(default_factory=list)
    exit_code: int = 0
    pretty: bool = False

    @classmethod
    def error(cls, reason: str, message: str, exit_code: int = 1) -> "CommandResult":
        return cls("error", {"reason": reason, "message": message}, [], exit_code)

    def to_json(self) -> Dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": list(self.diagnostics)}

    def render(self, pretty: Optional[bool] = None) -> str:
        pretty = self.pretty if pretty is None else pretty
        if not pretty:
            return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)
        rows = _table_rows(self.payload)
        if rows is not None:
            text = to_dataframe(rows).to_string(index=False)
            if self.diagnostics:
                text += "\n" + "\n".join(f"! {d}" for d in self.diagnostics)
            return text
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False, indent=2)


def _table_rows(payload) -> Optional[List[Dict]]:
    """Список строк для табличного вывода, если полезная нагрузка - таблица"""
    if isinstance(payload, dict):
        for key in ("rows", "fibers", "points", "table1"):
            value = payload.get(key)
            if isinstance(value, list) and value and all(isinstance(r, dict) for r in value):
                return value
    return None


# ---------------------------------------------------------------------------
# Ввод
# ---------------------------------------------------------------------------

def _read_input(args: argparse.Namespace, flag: Optional[str] = None, name: str = "input") -> str:
    """Ввод из флага, позиционного аргумента или stdin"""
    for value in (getattr(args, flag, None) if flag else None, getattr(args, name, None)):
        if value is not None:
            return value
    if not sys.stdin.isatty():
        data = sys.stdin.read().strip()
        if data:
            return data
    raise UsageError(f"Не задан ввод ({'--' + flag if flag else name}, позиционный аргумент или stdin)")


def _json_or_text(text: str):
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as e:
            raise UsageError(f"Некорректный JSON: {e}")
    return stripped


def _fiber(args: argparse.Namespace) -> FiberLocation:
    if args.fiber is None:
        raise UsageError("Не задан слой (--fiber)")
    return FiberLocation.parse(_json_or_text(args.fiber))


def _structure(args: argparse.Namespace) -> TorusStructure:
    if args.structure is None:
        raise UsageError("Не задана торическая структура (--structure)")
    data = _json_or_text(args.structure)
    if not isinstance(data, dict):
        raise UsageError("Структура задается JSON-объектом {\"b\", \"l\", \"e\", \"minpoly\"}")
    return TorusStructure.from_json(data)


NAMED_PRESENTATIONS: Dict[str, Callable] = {
    "braid": braid_presentation,
    "reduced-braid": reduced_braid_presentation,
    "three-generator": three_generator_presentation,
}


def _presentation(text: str):
    """Представление: текст, JSON, имя из NAMED_PRESENTATIONS или local:<тип слоя>"""
    value = _json_or_text(text)
    if isinstance(value, str):
        if value in NAMED_PRESENTATIONS:
            return NAMED_PRESENTATIONS[value]()
        if value.startswith("local:"):
            return local_presentation(value[len("local:"):])
    return parse_presentation(value)


# ---------------------------------------------------------------------------
# Команды
# ---------------------------------------------------------------------------

def _cmd_lattice_snf(args, config) -> CommandResult:
    matrix = _json_or_text(_read_input(args, "matrix"))
    if not isinstance(matrix, list):
        raise UsageError("Матрица задается JSON-массивом строк")
    rows = integer_matrix(matrix)
    snf = smith_normal_form(rows, ncols=None if rows else 0)
    return CommandResult("ok", {
        "U": [list(r) for r in snf.U],
        "D": [list(r) for r in snf.D],
        "V": [list(r) for r in snf.V],
        "diagonal": list(snf.diagonal),
        "rank": snf.rank,
    })


def _cmd_lattice_discr(args, config) -> CommandResult:
    value = _json_or_text(_read_input(args, "lattice"))
    if isinstance(value, dict):
        lattice = GramLattice.from_json(value)
    elif isinstance(value, list):
        lattice = GramLattice(value)
    else:
        lattice = cartan_gram(parse_spec(value))
    group = discriminant_group(lattice)
    return CommandResult("ok", {
        "rank": lattice.rank,
        "determinant": determinant(lattice.gram),
        "discriminant_group": group.to_json(),
        "text": str(group),
    })


def _cmd_lattice_embed(args, config) -> CommandResult:
    spec = parse_spec(_read_input(args, "spec"))
    witness = find_embedding(spec, config["search"]["node_budget"])
    payload = {"spec": format_spec(spec), "embeds": witness is not None}
    if witness is not None:
        payload["witness"] = witness.to_json()
        payload["torsion"] = witness.torsion().to_json()
    return CommandResult("ok", payload)


def _cmd_lattice_classify_odd(args, config) -> CommandResult:
    rows = classify_odd_torsion(config["search"]["node_budget"], config["output"]["progress"])
    return CommandResult("ok", {"rows": [r.to_json() for r in rows]})


def _cmd_lattice_classify_pred(args, config) -> CommandResult:
    if args.predicate not in PREDICATES:
        raise UsageError(f"Неизвестный предикат {args.predicate}; доступны: {', '.join(sorted(PREDICATES))}")
    rows = classify_by_predicate(PREDICATES[args.predicate], config["search"]["node_budget"],
                                 config["output"]["progress"])
    return CommandResult("ok", {"predicate": args.predicate, "rows": [r.to_json() for r in rows]})


def _cmd_lattice_dihedral(args, config) -> CommandResult:
    spec = parse_spec(args.spec)
    count = dihedral_quotient_count(spec, args.n, config["search"]["node_budget"])
    return CommandResult("ok", {"spec": format_spec(spec), "n": args.n, "count": count})


def _cmd_lattice_lemma(args, config) -> CommandResult:
    report = verify_lemma_e8()
    diagnostics = [] if report["certified"] else ["сертификат не получен"]
    return CommandResult("ok", report, diagnostics)


def _curve(args):
    return parse_curve(_json_or_text(_read_input(args, "curve")))


def _cmd_trigonal_reduce(args, config) -> CommandResult:
    curve = _curve(args)
    model = reduce(curve)
    payload = model.to_json()
    payload["discriminant"] = [fraction_text(c) for c in ascending(discriminant(model))]
    payload["components"] = curve_components(curve)
    return CommandResult("ok", payload)


def _cmd_trigonal_fibers(args, config) -> CommandResult:
    model = reduce(_curve(args))
    fibers = singular_fibers(model)
    total = sum(f.euler * f.location.degree for f in fibers)
    diagnostics = []
    try:
        sigma = format_spec(sigma_from_fibers(model))
    except NonMinimalFiberError as e:
        sigma = None
        diagnostics.append(str(e))
    if total != EULER_BUDGET:
        diagnostics.append(f"сумма эйлеровых характеристик {total} != {EULER_BUDGET}")
    return CommandResult("ok", {
        "fibers": [f.to_json() for f in fibers],
        "euler_total": total,
        "budget": EULER_BUDGET,
        "sigma_B": sigma,
    }, diagnostics)


def _cmd_trigonal_singularities(args, config) -> CommandResult:
    curve = _curve(args)
    points = classify_singular_points(curve)
    diagnostics = []
    try:
        sigma = format_spec(sigma_from_points(curve))
    except ToolkitError as e:
        sigma = None
        diagnostics.append(str(e))
    return CommandResult("ok", {"points": [p.to_json() for p in points], "sigma": sigma}, diagnostics)


def _cmd_trigonal_genus(args, config) -> CommandResult:
    return CommandResult("ok", {"genus": genus(_curve(args))})


def _cmd_trigonal_sextic(args, config) -> CommandResult:
    curve = _curve(args)
    location = _fiber(args)
    if args.degenerate:
        return CommandResult("ok", {"f0": location.to_json(), "family": degenerate_family(curve, location)})
    return CommandResult("ok", sextic_singularities(curve, location).to_json())


def _cmd_trigonal_cubic(args, config) -> CommandResult:
    return CommandResult("ok", associated_cubic(_curve(args), _fiber(args)).to_json())


def _cmd_trigonal_quartic(args, config) -> CommandResult:
    return CommandResult("ok", associated_quartic(_curve(args), _fiber(args)).to_json())


def _cmd_trigonal_intersect(args, config) -> CommandResult:
    point = (args.x0, args.y0)
    return CommandResult("ok", {
        "index": local_intersection_index(args.f, args.g, point),
        "resultant_valuation": resultant_valuation(args.f, args.g, args.x0),
    })


def _cmd_torus_detect(args, config) -> CommandResult:
    report = detect_torus(_curve(args))
    return CommandResult("ok", report.to_json(), list(report.warnings))


def _cmd_torus_verify(args, config) -> CommandResult:
    return CommandResult("ok", {"holds": verify_torus(_curve(args), _structure(args))})


def _cmd_torus_expected(args, config) -> CommandResult:
    spec = parse_spec(args.spec)
    return CommandResult("ok", {"spec": format_spec(spec), "count": expected_torus_count(spec)})


def _cmd_torus_inner_outer(args, config) -> CommandResult:
    return CommandResult("ok", inner_outer_split(_curve(args), _structure(args)))


def _cmd_torus_compose(args, config) -> CommandResult:
    coeffs = [_json_or_text(v) for v in (args.b, args.l, args.e)]
    return CommandResult("ok", compose_torus(*coeffs).to_json())


def _cmd_torus_newton(args, config) -> CommandResult:
    instance = _json_or_text(_read_input(args, "instance"))
    if not isinstance(instance, dict):
        raise UsageError("Экземпляр задается JSON-объектом")
    return CommandResult("ok", newton_divisibility_check(instance))


def _cmd_group_monodromy(args, config) -> CommandResult:
    m = monodromy(args.fiber_type)
    pi = product_word(m.ngens)
    payload = m.to_json()
    payload["fixes_product"] = m(pi) == pi
    payload["inverse"] = m.inverse().to_json()
    return CommandResult("ok", payload)


def _cmd_group_present(args, config) -> CommandResult:
    return CommandResult("ok", local_presentation(args.fiber_type).to_json())


def _cmd_group_abelianize(args, config) -> CommandResult:
    p = _presentation(_read_input(args, "presentation"))
    rank, torsion = abelianization(p)
    parts = ["Z" if rank == 1 else f"Z^{rank}"] if rank else []
    if not torsion.is_trivial:
        parts.append(str(torsion))
    return CommandResult("ok", {
        "free_rank": rank,
        "torsion": torsion.to_json(),
        "text": " + ".join(parts) or "0",
    })


def _cmd_group_homs(args, config) -> CommandResult:
    p = _presentation(_read_input(args, "presentation"))
    G = parse_group(args.group)
    bound = config["groups"]["hom_order_bound"]
    homs = enumerate_homs(p, G, bound)
    return CommandResult("ok", {
        "group": G.name,
        "order": G.order,
        "count": len(homs),
        "epimorphism": epimorphism_exists(p, G, bound),
        "all_images_abelian": all(image_is_abelian(G, h) for h in homs),
    })


def _cmd_group_spectrum(args, config) -> CommandResult:
    p = _presentation(_read_input(args, "presentation"))
    bound = args.max_order or config["groups"]["hom_order_bound"]
    spectrum = hom_count_spectrum(p, bound, config["output"]["progress"])
    return CommandResult("ok", {"max_order": bound, "spectrum": spectrum})


def _cmd_group_alexander(args, config) -> CommandResult:
    p = _presentation(_read_input(args, "presentation"))
    return CommandResult("ok", fox_alexander(p).to_json())


def _cmd_group_iso(args, config) -> CommandResult:
    G, H = parse_group(args.first), parse_group(args.second)
    bound = config["groups"]["iso_order_bound"]
    return CommandResult("ok", {
        "first": G.name,
        "second": H.name,
        "isomorphic": is_isomorphic_small(G, H, bound),
    })


def _cmd_report_tables(args, config) -> CommandResult:
    return CommandResult("ok", report_tables(config["search"]["node_budget"]))


# ---------------------------------------------------------------------------
# Разбор аргументов
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sextic-toolkit",
        description="Точная арифметика для тригональных кривых, решеток E8 и конечно представленных групп",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Примеры:
  python main.py lattice classify-odd-torsion
  python main.py lattice embed "A3+2A2"
  python main.py trigonal fibers --curve "y^3 + (x^3+1)^2"
  python main.py group abelianize "local:IV"
  python main.py report tables --pretty
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", dest="pretty", action="store_false", default=None,
                        help="Вывод JSON (по умолчанию)")
    output.add_argument("--pretty", dest="pretty", action="store_true", default=None,
                        help="Табличный/отформатированный вывод")
    common.add_argument("--config", help="Путь к YAML конфигурации")
    common.add_argument("--log-level", help="Уровень логирования (DEBUG, INFO, WARNING, ...)")
    common.add_argument("--progress", action="store_true", default=None, help="Показывать прогресс")

    modules = parser.add_subparsers(dest="module", required=True)

    def command(group, name: str, handler: Callable, help_text: str):
        sub = group.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    lattice = modules.add_parser("lattice", help="Решетки и вложения в E8").add_subparsers(dest="command", required=True)
    sub = command(lattice, "snf", _cmd_lattice_snf, "Нормальная форма Смита")
    sub.add_argument("input", nargs="?")
    sub.add_argument("--matrix")
    sub = command(lattice, "discr", _cmd_lattice_discr, "Дискриминантная группа")
    sub.add_argument("input", nargs="?")
    sub.add_argument("--lattice")
    sub = command(lattice, "embed", _cmd_lattice_embed, "Вложение системы корней в E8")
    sub.add_argument("input", nargs="?")
    sub.add_argument("--spec")
    command(lattice, "classify-odd-torsion", _cmd_lattice_classify_odd, "Системы с нечетным кручением")
    sub = command(lattice, "classify-pred", _cmd_lattice_classify_pred, "Классификация по предикату")
    sub.add_argument("predicate")
    sub = command(lattice, "dihedral-count", _cmd_lattice_dihedral, "Число диэдральных факторов")
    sub.add_argument("spec")
    sub.add_argument("n", type=int)
    command(lattice, "verify-lemma-e8", _cmd_lattice_lemma, "Сертификат для решетки (1, 9)")

    trigonal = modules.add_parser("trigonal", help="Тригональные кривые").add_subparsers(dest="command", required=True)
    for name, handler, help_text in (
        ("reduce", _cmd_trigonal_reduce, "Приведенная модель y^3 + P y + Q"),
        ("fibers", _cmd_trigonal_fibers, "Особые слои и бюджет 12"),
        ("singularities", _cmd_trigonal_singularities, "Особые точки"),
        ("genus", _cmd_trigonal_genus, "Геометрический род"),
        ("sextic", _cmd_trigonal_sextic, "Особенности секстики по слою F0"),
        ("cubic", _cmd_trigonal_cubic, "Присоединенная кубика"),
        ("quartic", _cmd_trigonal_quartic, "Присоединенная квартика"),
    ):
        sub = command(trigonal, name, handler, help_text)
        sub.add_argument("input", nargs="?")
        sub.add_argument("--curve")
        if name in ("sextic", "cubic", "quartic"):
            sub.add_argument("--fiber", help='x0, "inf" или {"minpoly": [...]}')
        if name == "sextic":
            sub.add_argument("--degenerate", action="store_true", help="Метка семейства при точке J10")
    sub = command(trigonal, "intersect", _cmd_trigonal_intersect, "Локальный индекс пересечения")
    sub.add_argument("f")
    sub.add_argument("g")
    sub.add_argument("--x0", default="0")
    sub.add_argument("--y0", default="0")

    torus = modules.add_parser("torus", help="Торические структуры").add_subparsers(dest="command", required=True)
    for name, handler, help_text in (
        ("detect", _cmd_torus_detect, "Все торические структуры"),
        ("verify", _cmd_torus_verify, "Проверка структуры"),
        ("inner-outer", _cmd_torus_inner_outer, "Внутренние и внешние точки"),
    ):
        sub = command(torus, name, handler, help_text)
        sub.add_argument("input", nargs="?")
        sub.add_argument("--curve")
        if name != "detect":
            sub.add_argument("--structure", help='{"b": [...], "l": [...], "e": [...], "minpoly": [...]}')
    sub = command(torus, "expected", _cmd_torus_expected, "Ожидаемое число структур по Σ")
    sub.add_argument("spec")
    sub = command(torus, "compose", _cmd_torus_compose, "Кривая (y + b)^3 + (l y + e)^2")
    sub.add_argument("b")
    sub.add_argument("l")
    sub.add_argument("e")
    sub = command(torus, "newton", _cmd_torus_newton, "Оценка индекса пересечения на ростке")
    sub.add_argument("input", nargs="?")
    sub.add_argument("--instance")

    group = modules.add_parser("group", help="Группы").add_subparsers(dest="command", required=True)
    sub = command(group, "monodromy", _cmd_group_monodromy, "Монодромия слоя")
    sub.add_argument("fiber_type")
    sub = command(group, "present", _cmd_group_present, "Локальное представление")
    sub.add_argument("fiber_type")
    for name, handler, help_text in (
        ("abelianize", _cmd_group_abelianize, "Абелианизация"),
        ("homs", _cmd_group_homs, "Гомоморфизмы в конечную группу"),
        ("spectrum", _cmd_group_spectrum, "Число гомоморфизмов в группы каталога"),
        ("alexander", _cmd_group_alexander, "Полином Александера"),
    ):
        sub = command(group, name, handler, help_text)
        sub.add_argument("input", nargs="?")
        sub.add_argument("--presentation")
        if name == "homs":
            sub.add_argument("--group", required=True)
        if name == "spectrum":
            sub.add_argument("--max-order", type=int)
    sub = command(group, "iso", _cmd_group_iso, "Изоморфизм малых групп")
    sub.add_argument("first")
    sub.add_argument("second")

    report = modules.add_parser("report", help="Сводные таблицы").add_subparsers(dest="command", required=True)
    command(report, "tables", _cmd_report_tables, "Таблица слоев и запреты")
    return parser


def run(argv: Sequence[str], config: Optional[Dict] = None) -> CommandResult:
    """
    Выполнение одной команды

    Returns:
        Результат с кодом выхода: 0 - успех, 1 - ошибка предметной
        области, 2 - ошибка использования или некорректный ввод
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 2
        if code == 0:
            return CommandResult("ok", {}, exit_code=0)
        return CommandResult.error("usage", "Некорректные аргументы командной строки", exit_code=2)

    if config is None:
        try:
            config = load_config(args.config)
        except FileNotFoundError as e:
            return CommandResult.error("usage", str(e), exit_code=2)
    config = copy.deepcopy(config)
    if args.log_level:
        config["logging"]["level"] = args.log_level
    if args.progress:
        config["output"]["progress"] = True
    if args.pretty is None:
        args.pretty = config["output"].get("format") == "pretty"

    logger.debug(f"Команда: {args.module} {args.command}")
    try:
        result = args.handler(args, config)
    except UsageError as e:
        return CommandResult.error("usage", str(e), exit_code=2)
    except InvalidInputError as e:
        logger.info(f"Некорректный ввод: {e}")
        return CommandResult.error(e.reason, str(e), exit_code=2)
    except ToolkitError as e:
        logger.info(f"Ошибка ({e.reason}): {e}")
        return CommandResult.error(e.reason, str(e))
    except (ValueError, IndexError, TypeError) as e:
        logger.warning(f"Необработанная ошибка ввода: {type(e).__name__}: {e}")
        return CommandResult.error(InvalidInputError.reason, f"{type(e).__name__}: {e}", exit_code=2)
    result.pretty = args.pretty
    return result


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа: печать результата и код выхода"""
    argv = list(sys.argv[1:] if argv is None else argv)
    config = None
    try:
        # логирование нужно до разбора команды, поэтому --config и
        # --log-level читаются заранее
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        pre.add_argument("--log-level")
        known, _ = pre.parse_known_args(argv)
        try:
            config = load_config(known.config)
        except FileNotFoundError as e:
            print(json.dumps(CommandResult.error("usage", str(e), 2).to_json(), sort_keys=True,
                             ensure_ascii=False))
            return 2
        if known.log_level:
            config["logging"]["level"] = known.log_level
        setup_logging(config)

        result = run(argv, config)
        print(result.render())
        return result.exit_code
    except KeyboardInterrupt:
        logger.warning("Прервано пользователем")
        return 130
    except Exception as e:
        logger.exception(f"Непредвиденная ошибка: {e}")
        raise
