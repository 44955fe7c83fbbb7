import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "specslope",
    deadline=None,  # first JIT call can take seconds
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("specslope")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260811)


def build_toy_dataset(root, n_per_group=8, grid=2048, seed=7, separator_index=900):
    """Write a small case/control directory tree and return its path.

    Case samples get a shifted intensity at one index plus slightly
    different roughness, so both magnitude and slope features carry signal.
    """
    rng = np.random.default_rng(seed)
    mz = np.linspace(200.0, 11000.0, grid)
    for group, shift in (("case", 1.0), ("control", 0.0)):
        gdir = root / group
        gdir.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_group):
            base = np.abs(rng.standard_normal(grid)).cumsum() / 40.0
            noise = rng.standard_normal(grid) * (0.35 + 0.3 * shift)
            x = base + noise
            x[separator_index] += shift * 25.0
            lines = ["# toy spectrum"] + [
                f"{a:.6f} {b:.8f}" for a, b in zip(mz, x)
            ]
            (gdir / f"s{i:02d}.txt").write_text("\n".join(lines) + "\n")
    return root


@pytest.fixture()
def toy_dataset_dir(tmp_path):
    return build_toy_dataset(tmp_path / "toyds")
