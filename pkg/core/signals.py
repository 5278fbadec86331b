from django.dispatch import Signal

# sent with `run` (an ExperimentRun) once its status leaves RUNNING
run_finished = Signal()

# sent with `name`, `report` by experiments and sweeps that complete
report_ready = Signal()
