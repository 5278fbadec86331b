from django.db import models
from django.utils.translation import gettext_lazy as _

from core.enums import ChoiceEnumField
from .enums import RunStatus, Subcommand


class ExperimentRun(models.Model):
    """One invocation of the `lab` command."""

    subcommand = models.CharField(
        max_length=32, choices=Subcommand.choices, verbose_name=_("Subcommand")
    )
    status = ChoiceEnumField(enum_type=RunStatus, verbose_name=_("Status"))
    config = models.JSONField(default=dict, verbose_name=_("Validated config"))
    constants = models.JSONField(default=dict, blank=True, verbose_name=_("Fitted constants"))
    passed = models.BooleanField(default=False, verbose_name=_("Passed"))
    exit_code = models.PositiveSmallIntegerField(null=True, blank=True, verbose_name=_("Exit code"))
    message = models.TextField(blank=True, verbose_name=_("Message"))
    output_dir = models.CharField(max_length=500, blank=True, verbose_name=_("Output directory"))
    code_version = models.CharField(max_length=32, blank=True, verbose_name=_("Code version"))
    created_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        app_label = 'lab'
        ordering = ['-created_at']
        verbose_name = _("Experiment run")
        verbose_name_plural = _("Experiment runs")

    def __str__(self):
        return f"{self.subcommand} #{self.pk} ({self.status})"
