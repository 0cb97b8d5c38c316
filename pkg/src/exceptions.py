"""
Иерархия исключений инструментария

Каждое исключение несет машиночитаемый код причины (reason),
который CLI передает в поле payload.reason ответа со статусом error.
"""


class ToolkitError(ValueError):
    """Базовая ошибка предметной области"""

    reason = "toolkit_error"

    def __init__(self, message: str, reason: str = None):
        """
        Args:
            message: Человекочитаемое описание
            reason: Код причины (по умолчанию - код класса)
        """
        super().__init__(message)
        if reason is not None:
            self.reason = reason


class DegenerateLatticeError(ToolkitError):
    """Вырожденная решетка там, где нужна невырожденная"""
    reason = "degenerate_lattice"


class SearchBudgetExceeded(ToolkitError):
    """Исчерпан бюджет узлов перебора"""
    reason = "search_budget_exceeded"


class NotEmbeddableError(ToolkitError):
    """Система корней не вкладывается в E8"""
    reason = "not_embeddable"


class DegenerateCurveError(ToolkitError):
    """Дискриминант тождественно равен нулю или нарушены степени"""
    reason = "degenerate_curve"


class NonMinimalFiberError(ToolkitError):
    """Неминимальный слой (ord P >= 4 и ord Q >= 6)"""
    reason = "non_minimal_fiber"


class NonSimpleSingularityError(ToolkitError):
    """Непростая особая точка"""
    reason = "non_simple_singularity"


class CommonComponentError(ToolkitError):
    """Кривые имеют общую компоненту через точку"""
    reason = "common_component"


class InvalidInputError(ToolkitError):
    """Некорректный ввод (грамматика, степени, тип слоя)"""
    reason = "invalid_input"


class GroupBoundError(ToolkitError):
    """Порядок группы превышает настроенную границу"""
    reason = "group_bound_exceeded"
