"""
``manage.py lab <subcommand>``: run one laboratory experiment.

    manage.py lab weights-check
    manage.py lab kernel --j 2 --xmin -40 --xmax 10
    manage.py lab persistence --preset kdv5 --output runs/kdv5
    manage.py lab kato --config kato.cfg --sweep beta=0.2,0.3,0.5 --workers 3

Config values come from, lowest first: serializer defaults, the ``--config``
file, ``--set key=value`` and the per-key flags.
"""

from django.core.management import call_command
from django.core.management.base import BaseCommand, CommandError

from core.services.base import ServiceError
from lab.config_files import dump_config, load_config_file, merge_config, parse_assignments
from lab.enums import Subcommand
from lab.serializers import ExperimentConfigSerializer
from lab.services import RunService, validate_config

# keys handled by dedicated options rather than per-key flags
RESERVED = {'subcommand', 'output', 'workers'}


class Command(BaseCommand):
    help = "Run a decay laboratory experiment and write its CSVs and manifest."

    def add_arguments(self, parser):
        parser.add_argument('subcommand', choices=Subcommand.values)
        parser.add_argument('--config', help="key = value config file")
        parser.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                            help="override any config key")
        parser.add_argument('--sweep', metavar='KEY=V1,V2,...',
                            help="one run per value, each in its own output directory")
        parser.add_argument('--workers', type=int, help="processes for sweeps and certification")
        parser.add_argument('--output', help="run directory")
        parser.add_argument('--record', dest='record', action='store_true', default=None,
                            help="persist the run in the database")
        parser.add_argument('--no-record', dest='record', action='store_false')
        parser.add_argument('--print-config', action='store_true',
                            help="print the merged, validated config and exit")
        for name in ExperimentConfigSerializer().fields:
            if name not in RESERVED:
                parser.add_argument(f'--{name}', dest=f'cfg_{name}', metavar='VALUE')

    def raw_config(self, options):
        layers = [{'subcommand': options['subcommand']}]
        if options['config']:
            file_config = load_config_file(options['config'])
            file_config.pop('subcommand', None)
            layers.append(file_config)
        layers.append(parse_assignments(options['set']))
        layers.append({
            key[len('cfg_'):]: value for key, value in options.items()
            if key.startswith('cfg_') and value is not None
        })
        layers.append({'output': options['output'], 'workers': options['workers']})
        return merge_config(*layers)

    def handle(self, *args, **options):
        try:
            raw = self.raw_config(options)
            if options['print_config']:
                self.stdout.write(dump_config(validate_config(raw)), ending='')
                return
        except ServiceError as e:
            raise CommandError(self._describe(e.message, e.errors), returncode=e.exit_code)

        service = RunService(context={'record': options['record']})
        if service.recording:
            call_command('migrate', verbosity=0, interactive=False)

        if options['sweep']:
            self.handle_sweep(service, raw, options)
            return

        result = service.execute(raw)
        self.report(result)
        if result.is_fail:
            raise CommandError(self._describe(result.message, result.errors), returncode=result.exit_code)

    def handle_sweep(self, service, raw, options):
        try:
            key, values = parse_assignments([options['sweep']], option='sweep').popitem()
        except ServiceError as e:
            raise CommandError(self._describe(e.message, e.errors), returncode=e.exit_code)
        values = [v.strip() for v in values.split(',') if v.strip()]
        results = service.sweep(raw, key, values, workers=options['workers'] or 1)
        for value, result in zip(values, results):
            self.stdout.write(f"{key}={value}: ", ending='')
            self.report(result)
        worst = max((r.exit_code for r in results if r.is_fail), default=0)
        if worst:
            raise CommandError(f"{sum(r.is_fail for r in results)} of {len(results)} runs failed",
                               returncode=worst)

    def report(self, result):
        record = result.data
        where = f" -> {record.output_dir}" if record is not None and record.output_dir else ''
        if result.is_ok:
            self.stdout.write(self.style.SUCCESS(f"passed: {result.message}{where}"))
        else:
            self.stderr.write(self.style.ERROR(f"exit {result.exit_code}: {result.message}{where}"))

    @staticmethod
    def _describe(message, errors):
        details = '; '.join(f"{k}: {v}" for k, v in (errors or {}).items())
        return f"{message} ({details})" if details else message
