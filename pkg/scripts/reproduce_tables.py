"""
Скрипт для воспроизведения сводных таблиц
Печатает таблицы в консоль или сохраняет их в JSON
"""

import json
import logging
import sys
from pathlib import Path

import pandas as pd

# Настройка кодировки для Windows
if sys.platform == 'win32':
    import codecs
    sys.stdout = codecs.getwriter('utf-8')(sys.stdout.buffer, 'strict')
    sys.stderr = codecs.getwriter('utf-8')(sys.stderr.buffer, 'strict')

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import load_config, setup_logging
from src.reports import report_tables, to_dataframe
from src.root_embeddings import classify_odd_torsion

logger = logging.getLogger(__name__)

SECTIONS = {
    "table1": "СЛОЙ f0 -> ТОЧКА O СЕКСТИКИ",
    "no_j10": "ЗАПРЕТЫ J2,0 И J2,1",
    "no_e12": "ЗАПРЕТЫ E12",
}


def print_tables(tables: dict, odd_rows: list) -> None:
    """Вывод таблиц в консоль"""
    with pd.option_context("display.width", 120, "display.max_columns", None):
        for key, title in SECTIONS.items():
            print("\n" + "="*70)
            print(f"  {title}")
            print("="*70)
            print(to_dataframe(tables[key]).to_string(index=False))

        print("\n" + "="*70)
        print("  НЕЧЕТНОЕ КРУЧЕНИЕ E8/Σ")
        print("="*70)
        print(to_dataframe(odd_rows).to_string(index=False))

        merge = tables["merge"]
        print("\n" + "="*70)
        print("  СЛИЯНИЕ СЛОЕВ")
        print("="*70)
        for name, ok in merge["identities"].items():
            print(f"  {'✅' if ok else '❌'} {name}")
        print(to_dataframe(merge["no_merge"]).to_string(index=False))


def main():
    """Главная функция"""
    import argparse

    parser = argparse.ArgumentParser(
        description='Воспроизведение сводных таблиц Sextic Toolkit',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Примеры использования:

  1. Вывести все таблицы в консоль:
     python scripts/reproduce_tables.py

  2. Сохранить таблицы в JSON:
     python scripts/reproduce_tables.py --json reports/tables.json

  3. С индикатором прогресса и своим конфигом:
     python scripts/reproduce_tables.py --progress --config config/toolkit_config.yaml
        """
    )

    parser.add_argument(
        '--json',
        metavar='PATH',
        help='Сохранить таблицы в JSON-файл'
    )

    parser.add_argument(
        '--config',
        help='Путь к YAML-конфигурации (по умолчанию: config/toolkit_config.yaml)'
    )

    parser.add_argument(
        '--progress',
        action='store_true',
        help='Показывать индикатор прогресса классификации'
    )

    args = parser.parse_args()

    config = load_config(args.config)
    setup_logging(config)
    budget = config["search"]["node_budget"]

    print("\n" + "="*70)
    print("  📊 СВОДНЫЕ ТАБЛИЦЫ SEXTIC TOOLKIT")
    print("="*70)

    try:
        tables = report_tables(budget)
        odd_rows = [row.to_json() for row in classify_odd_torsion(budget, args.progress)]
    except Exception as e:
        logger.error(f"Ошибка при построении таблиц: {e}")
        print(f"❌ Ошибка: {e}")
        return 1

    if args.json:
        out = Path(args.json)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, 'w', encoding='utf-8') as f:
            json.dump({**tables, "odd_torsion": odd_rows}, f, ensure_ascii=False, indent=2, sort_keys=True)
        logger.info(f"Таблицы сохранены: {out}")
        print(f"\n✅ Таблицы сохранены: {out}")
    else:
        print_tables(tables, odd_rows)

    return 0


if __name__ == "__main__":
    sys.exit(main())
