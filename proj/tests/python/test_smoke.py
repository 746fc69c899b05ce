# Copyright 2026 The AutoSynth Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import math

import numpy as np
import pytest

import autosynth


def test_search_space_size():
    assert autosynth.search_space_size() == 9**11 == 31_381_059_609


def test_policy_round_trips():
    p = autosynth.Policy([0, 1, 2, 3, 4, 5, 6, 7, 8, 0, 1])
    assert p.digits() == "01234567801"
    assert autosynth.Policy.from_json(p.to_json()) == p
    assert json.loads(p.to_json())["labels"] == p.labels
    assert autosynth.Policy.from_index(p.index()) == p
    assert autosynth.Policy.full_range().digits() == "8" * 11
    with pytest.raises(autosynth.InvalidArgument):
        autosynth.Policy([9] * 11)
    with pytest.raises(autosynth.InvalidArgument):
        autosynth.Policy([0] * 10)


def test_mutation_is_one_step():
    p = autosynth.Policy.random(3)
    for seed in range(200):
        c = p.mutate(seed)
        assert sum(a != b for a, b in zip(p.labels, c.labels)) == 1


def test_chamfer_hand_value_and_oracle():
    x = np.array([[0.0, 0, 0], [1, 0, 0]])
    y = np.array([[0.0, 0, 0], [2, 0, 0]])
    assert autosynth.chamfer(x, y) == 0.5
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(40, 3)), rng.normal(size=(40, 3))
    d = ((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)
    ref = (d.min(1).sum() + d.min(0).sum()) / (2 * len(a))
    assert autosynth.chamfer(a, b) == pytest.approx(ref, abs=1e-12)
    with pytest.raises(autosynth.SizeMismatch):
        autosynth.chamfer(a, b[:5])


def test_sphere_sdf_and_mesh():
    pts = np.array([[0.0, 0, 0], [2, 0, 0], [0, 0.5, 0]])
    assert np.allclose(autosynth.primitive_sdf("sphere", pts), [-1, 1, -0.5])
    v, f = autosynth.canonical_mesh("sphere")
    tri = v[f]
    area = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1).sum()
    assert abs(area / (4 * math.pi) - 1) < 0.02
    cloud = autosynth.sample_surface(v, f, 500, 1)
    assert cloud.shape == (500, 3)
    assert np.allclose(np.linalg.norm(cloud, axis=1), 1, atol=0.02)


def test_generate_dataset_is_deterministic():
    p = autosynth.Policy.full_range()
    a = autosynth.generate_dataset(p, 4, points=64, seed=7)
    b = autosynth.generate_dataset(p, 4, points=64, seed=7, threads=2)
    assert a["digest"] == b["digest"]
    assert len(a["clouds"]) == 4 and a["clouds"][0].shape == (64, 3)
    for v, _ in a["meshes"]:
        assert np.linalg.norm(v, axis=1).max() == pytest.approx(1.0)


def test_search_with_python_evaluator():
    hidden = autosynth.Policy.random(11)

    def hamming(p):
        return float(sum(a != b for a, b in zip(p.labels, hidden.labels)))

    r = autosynth.run_search(hamming, population=16, trials=300, seed=1)
    assert len(r["history"]) == 300
    best = [row["best_score"] for row in r["history"]]
    assert all(b <= a for a, b in zip(best, best[1:]))
    assert r["best_score"] == min(best) == hamming(r["best_policy"])
    assert r["history_csv"].startswith("trial,parent_hash,child_labels,child_score,best_score\n")
    again = autosynth.run_search(hamming, population=16, trials=300, seed=1)
    assert again["history_csv"] == r["history_csv"]


def test_evaluator_errors_propagate():
    def boom(p):
        raise ValueError("nope")

    with pytest.raises(Exception):
        autosynth.run_search(boom, population=2, trials=1, seed=0)


def test_cli_gen(tmp_path):
    status, out, _ = autosynth.run_cli(
        ["gen", "--policy", "full-range", "-n", "3", "-v", "32", "--out", str(tmp_path / "d")]
    )
    assert status == 0
    assert (tmp_path / "d" / "manifest.json").exists()
    assert "manifest.json" in out
    assert autosynth.run_cli(["gen", "--policy", "full-range", "-n", "0"])[0] == 2
