"""Smoke test for the csm_born extension module.

Build first, e.g. `maturin develop -m crates/py/Cargo.toml`, then run
`python python/smoke_test.py` from the repository root.
"""

import json
import math
import pathlib

import csm_born

DATASETS = pathlib.Path(__file__).resolve().parent.parent / "datasets"


def close(a, b, eps=1e-9):
    return abs(a - b) <= eps


def main():
    rho = csm_born.DensityOperator.maximally_mixed(3)
    probs = csm_born.born_probabilities(rho, csm_born.Context.fourier(3))
    assert all(close(p, 1 / 3) for p in probs), probs

    pure = csm_born.DensityOperator.pure([1, 0, 0])
    assert close(csm_born.born_probabilities(pure, csm_born.Context.standard(3))[0], 1.0)

    samples = json.loads((DATASETS / "gleason/demo_samples_dim3.json").read_text())
    vectors = [[complex(*z) for z in s["vector"]] for s in samples["samples"]]
    values = [s["value"] for s in samples["samples"]]
    report = csm_born.reconstruct(vectors, values)
    assert report["residual_rms"] <= 1e-10 and report["design_rank"] == 9

    try:
        csm_born.reconstruct(vectors[:3], values[:3])
        raise AssertionError("single context must be rejected")
    except ValueError as e:
        assert "NotInformationallyComplete" in str(e)

    fit = csm_born.fit_ray_map((DATASETS / "raymaps/unitary_dim3.json").read_text())
    assert fit["verdict"] == "Unitary" and fit["residual"] <= 1e-8
    fit = csm_born.fit_ray_map((DATASETS / "raymaps/antiunitary_dim3.json").read_text())
    assert fit["verdict"] == "Antiunitary" and fit["antiunitary"]

    ks = csm_born.ks_search((DATASETS / "ks/cabello18_dim4.json").read_text())
    assert ks["status"] == "UNSAT" and ks["certified"]

    path = csm_born.permutation_path([1, 0, 2])
    assert max(path["endpoint_errors"]) <= 1e-9
    assert path["det_sign"] == -1 and not path["connected_in_orthogonal_group"]

    c = csm_born.Context.fourier(3)
    log = csm_born.simulate([1, 0, 0], [c, c, c], seed=4)
    assert len(set(log)) == 1, log

    s = 1 / math.sqrt(2)
    try:
        csm_born.Context([[1, 0, 0], [s, s, 0], [0, 0, 1]])
        raise AssertionError("non-orthogonal vectors must be rejected")
    except ValueError:
        pass

    print("python smoke test passed")


if __name__ == "__main__":
    main()
