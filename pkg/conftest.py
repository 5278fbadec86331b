"""
Pytest Configuration and Fixtures

Shared fixtures for the laboratory tests: small grids, weights, sweeps and
experiment configs sized to run in seconds.
"""
import pytest

from certifier.sweeps import SweepSpec
from decaylab.experiments import DecayConfig
from decaylab.profiles import ProfileSpec
from solver.grid import Grid
from solver.nonlinearity import NonlinearitySpec, preset
from weights.kato import KatoWeight
from weights.piecewise import PiecewiseWeight


@pytest.fixture
def grid():
    """Return a 256-point grid on [-40, 40)."""
    return Grid(L=40.0, M=256)


@pytest.fixture
def wide_grid():
    """Return a 512-point grid on [-60, 60) for trajectories that spread."""
    return Grid(L=60.0, M=512)


@pytest.fixture
def weight():
    """Return the weight with a0 = 1, epsilon = 0, N = 10."""
    return PiecewiseWeight.build(a0=1.0, epsilon=0.0, N=10)


@pytest.fixture
def kato_weight():
    """Return a Kato weight with beta = 0.3, delta = 0.1."""
    return KatoWeight(beta=0.3, delta=0.1)


@pytest.fixture
def small_sweep():
    """Return a one-family certification sweep on coarse grids."""
    return SweepSpec.from_settings(
        a0_values=(1.0,),
        epsilon_values=(0.0,),
        N_values=(5, 10),
        x_step=0.05,
        x_tail=20.0,
        t_step=0.25,
        bridge_y_max=50.0,
        bridge_y_points=501,
        beta_values=(0.3,),
        delta_values=(0.1,),
        kato_bx_points=601,
        refine=False,
    )


@pytest.fixture
def zero_spec():
    """Return the linear flow."""
    return NonlinearitySpec.zero()


@pytest.fixture
def kdv5_spec():
    """Return the fifth-order KdV nonlinearity."""
    return preset('kdv5')


@pytest.fixture
def gaussian():
    """Return a wide, small Gaussian data profile."""
    return ProfileSpec(kind='gaussian', amplitude=0.05, center=0.0, width=3.0)


@pytest.fixture
def linear_config(wide_grid, zero_spec, gaussian):
    """Return a short linear decay experiment without refinement."""
    return DecayConfig(
        grid=wide_grid,
        spec=zero_spec,
        T=0.2,
        dt=1e-3,
        cadence=20,
        profile=gaussian,
        perturbation=ProfileSpec(kind='bump', amplitude=0.01, center=-20.0, width=4.0),
        a0=0.5,
        N=10,
        beta=0.3,
        epsilon_values=(0.0, 0.1),
        refine=False,
    )


@pytest.fixture
def run_dir(tmp_path):
    """Return an empty output directory."""
    path = tmp_path / 'run'
    path.mkdir()
    return path
