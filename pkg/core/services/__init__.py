from .base import (
    BaseService,
    NumericalDefect,
    ServiceError,
    ServiceResult,
    ValidationError,
)

__all__ = [
    'BaseService',
    'NumericalDefect',
    'ServiceError',
    'ServiceResult',
    'ValidationError',
]
