"""
Base Service Module

Error hierarchy, result wrapper and the abstract service used by the
laboratory apps. Pure numerical functions raise the errors below; services
catch them and hand back a `ServiceResult`.
"""

from typing import Optional, Dict, Any, TypeVar, Generic

from core.state_machine import StateMachine, TransitionError


class ServiceError(Exception):
    """Base exception for laboratory errors."""

    # exit status reported by the command line when this error ends a run
    exit_code = 1

    def __init__(self, message: str, errors: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.errors = errors or {}


class ValidationError(ServiceError):
    """A precondition or configuration value is out of range."""
    exit_code = 1


class NumericalDefect(ServiceError):
    """NaN, overflow or a broken numerical invariant during evaluation."""
    exit_code = 3


T = TypeVar('T')


class ServiceResult(Generic[T]):
    """
    Result wrapper for service operations.

    Provides a consistent interface for handling success/failure scenarios.
    """

    def __init__(
        self,
        success: bool,
        data: Optional[T] = None,
        message: str = "",
        errors: Optional[Dict[str, Any]] = None,
        exit_code: int = 0,
    ):
        self.success = success
        self.data = data
        self.message = message
        self.errors = errors or {}
        self.exit_code = exit_code

    @classmethod
    def ok(cls, data: T, message: str = "") -> 'ServiceResult[T]':
        """Create a successful result."""
        return cls(success=True, data=data, message=message)

    @classmethod
    def fail(
        cls,
        message: str,
        errors: Optional[Dict[str, Any]] = None,
        exit_code: int = 1,
        data: Optional[T] = None,
    ) -> 'ServiceResult[T]':
        """Create a failed result."""
        return cls(
            success=False, data=data, message=message,
            errors=errors, exit_code=exit_code,
        )

    @classmethod
    def from_error(cls, error: ServiceError, data: Optional[T] = None) -> 'ServiceResult[T]':
        """Wrap a raised laboratory error, keeping its exit status."""
        return cls.fail(error.message, error.errors, error.exit_code, data)

    @property
    def is_ok(self) -> bool:
        return self.success

    @property
    def is_fail(self) -> bool:
        return not self.success


class BaseService:
    """
    Abstract base class for laboratory services.

    Services validate input and move the model instance they own
    through its workflow.
    """

    # Model class managed by this service
    model_class = None

    # Workflow class for state management
    workflow_class = None

    def __init__(self, context: Optional[Dict[str, Any]] = None):
        """
        Initialize service.

        Args:
            context: Additional context data (e.g. command-line switches)
        """
        self.context = context or {}

    def validate(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Validate input data.

        Args:
            data: Input data to validate

        Returns:
            Validated and cleaned data

        Raises:
            ValidationError: If validation fails
        """
        return data

    def get_workflow(self, instance: Any) -> StateMachine:
        """Build the workflow state machine bound to an instance."""
        if self.workflow_class is None:
            raise NotImplementedError("workflow_class must be defined")
        return self.workflow_class(instance)

    def execute_workflow_trigger(
        self,
        instance: Any,
        trigger_name: str,
        save: bool = True,
        **kwargs
    ) -> ServiceResult:
        """
        Execute a workflow trigger on an instance.

        Args:
            instance: The instance to transition
            trigger_name: Name of the workflow trigger
            save: Persist the instance after the transition
            **kwargs: Passed to transition callbacks

        Returns:
            ServiceResult with the transitioned instance
        """
        try:
            self.get_workflow(instance).trigger(trigger_name, **kwargs)
        except TransitionError as e:
            return ServiceResult.fail(str(e), {'trigger': trigger_name})
        if save and getattr(instance, 'pk', None) is not None:
            instance.save()
        return ServiceResult.ok(instance, f"Trigger '{trigger_name}' executed")
