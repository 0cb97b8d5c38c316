"""
Сводные таблицы: выделенный слой -> точка O секстики, запреты для
J_{2,i} и E12, замечание о слиянии слоев
"""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

import pandas as pd

from .exceptions import NotEmbeddableError
from .fp_groups import local_images_abelian, parse_group
from .lattice_core import TorsionGroup
from .root_embeddings import (
    ADESymbol,
    DEFAULT_NODE_BUDGET,
    RootSystemSpec,
    find_embedding,
    format_spec,
    minimal_euler,
    parse_spec,
    spec_torsion,
)
from .trigonal_geometry import (
    EULER_BUDGET,
    KODAIRA_SYNONYMS,
    MERGE_IDENTITIES,
    check_merge_identities,
    euler_number,
    table1_label,
)

logger = logging.getLogger(__name__)

# Системы корней с нетривиальным нечетным кручением E8/Σ
ODD_TORSION_SPECS = ("4A2", "3A2", "3A2+A1", "A5+A2", "A8", "E6+A2", "2A4")

# Системы, не вкладывающиеся в E8, хотя ранг и бюджет это допускают
NON_EMBEDDABLE_SPECS = ("A3+2A2", "A4+2A2", "A6+A2")

# Для этих Σ два слоя I1 не сливаются в слой II (для 3A2+A1 см. merge_remark)
NO_MERGE_SPECS = ("3A2", "A5+A2", "A8", "2A4")


def table1() -> List[Dict]:
    """
    Таблица "слой f0 -> особая точка O секстики"

    Returns:
        Строки с обозначением слоя, типом по Кодаире, эйлеровой
        характеристикой и меткой точки O; параметрические серии
        Ã_p и D̃_q приведены отдельными строками
    """
    rows = []
    for name, kodaira in KODAIRA_SYNONYMS.items():
        rows.append({
            "fiber": name,
            "kodaira": kodaira,
            "euler": euler_number(kodaira),
            "point_O": table1_label(kodaira),
        })
    rows.append({"fiber": "Ã_p (p>=1)", "kodaira": "I_{p+1}", "euler": "p+1", "point_O": "J2,{p+1}"})
    rows.append({"fiber": "D̃_q (q>=4)", "kodaira": "I_{q-4}*", "euler": "q+2", "point_O": "J3,{q-4}"})
    return rows


def _embeds(text: str, node_budget: int) -> bool:
    return find_embedding(parse_spec(text), node_budget) is not None


def _dihedral_quotients(torsion: TorsionGroup) -> List[str]:
    return [f"D{2 * p}" for p in sorted(p for p in (3, 5, 7) if torsion.has_torsion(p))]


@lru_cache(maxsize=None)
def special_fiber_forces_abelian(kodaira: str, dihedral: Tuple[str, ...] = ("D6",)) -> bool:
    """
    Делает ли слой kodaira абелевым каждый фактор группы в dihedral

    Локальная группа слоя II - Z, слоя III - Z^2; обе отображаются на
    группу дополнения секстики, так что диэдральный фактор невозможен.
    """
    return local_images_abelian(kodaira, [parse_group(name) for name in dihedral])


def no_j10_verdicts(node_budget: int = DEFAULT_NODE_BUDGET) -> List[Dict]:
    """
    Запреты для секстик с точкой J_{2,0} или J_{2,1}

    J_{2,i} + Σ с Σ, не вкладывающейся в E8, невозможна; J_{2,1} + 4A2
    невозможна по бюджету: минимальная эйлерова характеристика 4A2
    плюс слой I1 больше 12.
    """
    rows = []
    for i in (0, 1):
        for text in NON_EMBEDDABLE_SPECS:
            embeds = _embeds(text, node_budget)
            rows.append({
                "sextic": f"J2,{i}+{text}",
                "sigma_B": text,
                "reason": "not_embeddable" if not embeds else "none",
                "prohibited": not embeds,
            })
    spec = parse_spec("4A2")
    total = minimal_euler(spec) + euler_number("I1")
    rows.append({
        "sextic": "J2,1+4A2",
        "sigma_B": "4A2",
        "reason": "fiber_budget" if total > EULER_BUDGET else "none",
        "euler_needed": total,
        "prohibited": total > EULER_BUDGET,
    })
    logger.info(f"Запреты J2,i: {sum(r['prohibited'] for r in rows)} из {len(rows)}")
    return rows


def no_e12_verdicts(node_budget: int = DEFAULT_NODE_BUDGET) -> List[Dict]:
    """
    Запреты для секстик E12 + Σ

    Слой II не проходит через особые точки B, поэтому Σ_B = Σ. При
    нечетном кручении E8/Σ группа обязана иметь диэдральный фактор
    D_{2p}, а локальная группа слоя II делает абелевым любой ее фактор.
    """
    rows = []
    for text in ODD_TORSION_SPECS:
        spec = parse_spec(text)
        torsion = spec_torsion(spec, node_budget)
        dihedral = _dihedral_quotients(torsion)
        forced = special_fiber_forces_abelian("II", tuple(dihedral) or ("D6",))
        prohibited = bool(dihedral) and forced
        rows.append({
            "sextic": f"E12+{format_spec(spec)}",
            "sigma_B": format_spec(spec),
            "torsion": list(torsion.invariant_factors),
            "dihedral_quotients": dihedral,
            "abelian_forced": forced,
            "reason": "dihedral_vs_abelian" if prohibited else "none",
            "prohibited": prohibited,
        })
    for text in NON_EMBEDDABLE_SPECS:
        try:
            spec_torsion(parse_spec(text), node_budget)
            prohibited = False
        except NotEmbeddableError:
            prohibited = True
        rows.append({
            "sextic": f"E12+{text}",
            "sigma_B": text,
            "torsion": None,
            "dihedral_quotients": [],
            "abelian_forced": special_fiber_forces_abelian("II"),
            "reason": "not_embeddable" if prohibited else "none",
            "prohibited": prohibited,
        })
    return rows


def merge_verdict(spec: RootSystemSpec, target: str, node_budget: int = DEFAULT_NODE_BUDGET) -> Dict:
    """
    Может ли слияние слоев в слой target (II или III) произойти при Σ_B = spec

    Returns:
        Строка с остатком бюджета, диэдральными факторами и флагом merges
    """
    parts = dict(MERGE_IDENTITIES)[target]
    needed = minimal_euler(spec)
    free = EULER_BUDGET - needed
    # I2 в слиянии - слой через точку A1 кривой B, он уже учтен в Σ
    free_needed = parts.count("I1")
    has_parts = free >= free_needed and all(
        p == "I1" or (p == "I2" and ADESymbol("A", 1) in spec.summands) for p in parts
    )
    dihedral = _dihedral_quotients(spec_torsion(spec, node_budget))
    forced = special_fiber_forces_abelian(target, tuple(dihedral) or ("D6",))
    blocked = bool(dihedral) and forced
    if not has_parts:
        reason = "fiber_budget"
    else:
        reason = "dihedral_vs_abelian" if blocked else "none"
    return {
        "sigma_B": format_spec(spec),
        "merge": f"{'+'.join(parts)}={target}",
        "point_O": table1_label(target),
        "minimal_euler": needed,
        "free_I1_fibers": free,
        "dihedral_quotients": dihedral,
        "abelian_forced": forced,
        "merges": has_parts and not blocked,
        "reason": reason,
    }


def merge_remark(node_budget: int = DEFAULT_NODE_BUDGET) -> Dict:
    """
    Тождества слияния слоев и системы Σ, для которых слияние невозможно

    Для 3A2, A5+A2, A8, 2A4 два слоя I1 не сливаются в слой II, для
    3A2+A1 точка A1 не сливается с оставшимся слоем I1 в слой III:
    бюджет это допускает, но секстика E12 или E13 получила бы абелеву
    группу с диэдральным фактором.
    """
    entries = [merge_verdict(parse_spec(text), "II", node_budget) for text in NO_MERGE_SPECS]
    entries.append(merge_verdict(parse_spec("3A2+A1"), "III", node_budget))
    return {"identities": check_merge_identities(), "no_merge": entries}


def report_tables(node_budget: int = DEFAULT_NODE_BUDGET) -> Dict:
    return {
        "table1": table1(),
        "no_j10": no_j10_verdicts(node_budget),
        "no_e12": no_e12_verdicts(node_budget),
        "merge": merge_remark(node_budget),
    }


def to_dataframe(rows: Iterable[Dict]) -> pd.DataFrame:
    """Строки отчета в DataFrame; вложенные списки выводятся строками"""
    frame = pd.DataFrame(list(rows))
    for column in frame.columns:
        if frame[column].map(lambda v: isinstance(v, (list, dict))).any():
            frame[column] = frame[column].map(
                lambda v: ", ".join(map(str, v)) if isinstance(v, list) else str(v)
            )
    return frame
