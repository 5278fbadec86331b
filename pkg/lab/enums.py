"""
Laboratory Run Enumerations
"""

from core.enums import ChoiceEnum, _


class Subcommand(ChoiceEnum):
    WEIGHTS_CHECK = 'weights-check', _('Certify the weight inequalities')
    KERNEL = 'kernel', _('Tabulate and fit the dispersive kernel')
    SOLVE = 'solve', _('Evolve one trajectory')
    PERSISTENCE = 'persistence', _('Moving-weight persistence')
    DIFFERENCE = 'difference', _('Weighted decay of a difference')
    KATO = 'kato', _('Exponential Kato weight')
    LEDGER = 'ledger', _('Weighted energy ledger')


class RunStatus(ChoiceEnum):
    """Lifecycle of an ExperimentRun."""
    PENDING = 'pending', _('Pending')
    RUNNING = 'running', _('Running')
    PASSED = 'passed', _('Passed')
    FAILED = 'failed', _('Failed')
    DEFECTIVE = 'defective', _('Numerical defect')
    REJECTED = 'rejected', _('Rejected config')
