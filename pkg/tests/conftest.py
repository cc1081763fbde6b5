import numpy as np
import pytest

from ddlab import Scenario, case_config
from ddlab.harness import run_sparsity

# Figure-grade sparsity sweep shared by the ordering tests and the acceptance
# suite: paper-scale frames, 200 realizations per case, window sweep 0..32.
FIG3_SEED = 20260810
FIG3_REALIZATIONS = 200
FIG3_P = 1024
FIG3_M = 16
FIG3_LCS = tuple(range(33))


@pytest.fixture(scope="session")
def fig3_curves():
    """{(case, domain, L_c): (mean lpr, mean spr)} at figure-grade settings."""
    curves = {}
    for case in (1, 2, 3, 4):
        cfg = case_config(case, FIG3_P, FIG3_M)
        sc = Scenario(cfg=cfg, trials=FIG3_REALIZATIONS, seed=FIG3_SEED)
        for rec in run_sparsity(sc, FIG3_LCS):
            curves[(case, rec.domain, rec.L_c)] = (rec.lpr, rec.spr)
    return curves


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
