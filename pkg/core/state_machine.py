"""
Run lifecycle state machines.

A workflow lists its `Transition`s as class attributes; the metaclass
indexes them by (source, trigger). Terminal states are the targets that
never appear as a source.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)

State = Union[str, Enum]


class TransitionError(Exception):
    """Raised when a trigger is not valid from the current state."""


def state_value(state: State) -> str:
    return state.value if isinstance(state, Enum) else state


@dataclass(frozen=True)
class Transition:
    source: State
    target: State
    trigger: str
    after: Optional[Callable[..., None]] = None


class StateMachineMeta(type):
    """Collects Transition attributes into `_table` and `_terminal`."""

    def __new__(mcs, name, bases, namespace):
        table: Dict[Tuple[str, str], Transition] = {}
        for base in bases:
            table.update(getattr(base, '_table', {}))
        for value in namespace.values():
            if isinstance(value, Transition):
                key = (state_value(value.source), value.trigger)
                if key in table:
                    raise TypeError(f"{name}: trigger {value.trigger!r} defined twice from {key[0]!r}")
                table[key] = value

        sources = {source for source, _ in table}
        targets = {state_value(t.target) for t in table.values()}
        namespace['_table'] = table
        namespace['_terminal'] = frozenset(targets - sources)
        return super().__new__(mcs, name, bases, namespace)


class StateMachine(metaclass=StateMachineMeta):
    """
    Drives the `state_field` of a model instance through its transitions.

    Usage:
        class RunWorkflow(StateMachine):
            start = Transition(RunStatus.PENDING, RunStatus.RUNNING, 'start')
    """

    state_field = 'status'

    def __init__(self, instance: Any):
        self.instance = instance

    @property
    def current_state(self) -> str:
        return state_value(getattr(self.instance, self.state_field))

    @property
    def available_triggers(self) -> List[str]:
        current = self.current_state
        return [trigger for source, trigger in self._table if source == current]

    @property
    def is_terminal(self) -> bool:
        return self.current_state in self._terminal

    @classmethod
    def terminal_states(cls) -> FrozenSet[str]:
        return cls._terminal

    def trigger(self, trigger_name: str, **kwargs) -> str:
        """
        Fire `trigger_name` and return the new state.

        Raises:
            TransitionError: If the trigger is not valid from the current state
        """
        source = self.current_state
        transition = self._table.get((source, trigger_name))
        if transition is None:
            raise TransitionError(f"Trigger '{trigger_name}' not valid from state '{source}'")

        target = state_value(transition.target)
        setattr(self.instance, self.state_field, target)
        logger.debug("%s: %s -> %s", type(self.instance).__name__, source, target)
        if transition.after:
            transition.after(self.instance, **kwargs)
        return target
