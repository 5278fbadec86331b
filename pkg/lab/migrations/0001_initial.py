import core.enums
import lab.enums
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('subcommand', models.CharField(choices=[('weights-check', 'Certify the weight inequalities'), ('kernel', 'Tabulate and fit the dispersive kernel'), ('solve', 'Evolve one trajectory'), ('persistence', 'Moving-weight persistence'), ('difference', 'Weighted decay of a difference'), ('kato', 'Exponential Kato weight'), ('ledger', 'Weighted energy ledger')], max_length=32, verbose_name='Subcommand')),
                ('status', core.enums.ChoiceEnumField(enum_type=lab.enums.RunStatus, max_length=50, verbose_name='Status')),
                ('config', models.JSONField(default=dict, verbose_name='Validated config')),
                ('constants', models.JSONField(blank=True, default=dict, verbose_name='Fitted constants')),
                ('passed', models.BooleanField(default=False, verbose_name='Passed')),
                ('exit_code', models.PositiveSmallIntegerField(blank=True, null=True, verbose_name='Exit code')),
                ('message', models.TextField(blank=True, verbose_name='Message')),
                ('output_dir', models.CharField(blank=True, max_length=500, verbose_name='Output directory')),
                ('code_version', models.CharField(blank=True, max_length=32, verbose_name='Code version')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'verbose_name': 'Experiment run',
                'verbose_name_plural': 'Experiment runs',
                'ordering': ['-created_at'],
            },
        ),
    ]
