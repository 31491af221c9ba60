import numpy as np
import pytest

import mbmint as mb


@pytest.fixture(scope="session")
def h_const_075() -> mb.HurstFunction:
    return mb.constant_hurst(0.75)


@pytest.fixture(scope="session")
def h_sin() -> mb.HurstFunction:
    return mb.sin_hurst(0.7, 0.1)


@pytest.fixture(scope="session")
def weights_const_n64(h_const_075) -> mb.KernelWeights:
    return mb.build_kernel_weights(h_const_075, 64, 8)


def path_rng(master_seed: int, n: int, index: int) -> np.random.Generator:
    """Per-path stream mirroring the experiments module's convention."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=(master_seed, n, index))
    )
