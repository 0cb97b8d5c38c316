"""
Sextic Toolkit - точная арифметика для тригональных кривых и секстик
Решетки E8, торические структуры, локальные фундаментальные группы
"""

__version__ = "1.0.0"
