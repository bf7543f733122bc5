# Copyright 2026 The decdyn Authors
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

"""Regenerates the scenario corpus in this directory.

Random matrices come from a fixed seed and are rounded to six decimals, so
the files are reproducible and readable. Run from any directory:

    python3 scenarios/generate.py
"""

import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
RNG = np.random.default_rng(20260101)


def cmat(m):
    """Row-major nested [re, im] encoding."""
    return [[[round(float(z.real), 6), round(float(z.imag), 6)] for z in row] for row in m]


def gaussian(d, scale=1.0):
    g = RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d))
    return scale * g / np.sqrt(2.0)


def hermitian(d, scale=1.0):
    g = gaussian(d, scale)
    return 0.5 * (g + g.conj().T)


def spec(d, nv, nw, scale=0.5):
    out = {"H": cmat(hermitian(d))}
    if nv:
        out["V"] = [cmat(gaussian(d, scale)) for _ in range(nv)]
    if nw:
        out["W"] = [cmat(gaussian(d, scale)) for _ in range(nw)]
    return out


def swap12():
    u = np.zeros((3, 3))
    u[0, 1] = u[1, 0] = u[2, 2] = 1.0
    return u


ROTATED_CHOI = {
    "kind": "compose",
    "description": "Choi's map after conjugation by the transposition of basis vectors 1 and 2",
    "maps": [
        {"kind": "named_map", "name": "choi_map"},
        {"kind": "kraus", "families": [{"side": "cp", "operators": [cmat(swap12())]}]},
    ],
}


def maps():
    amp = 0.36
    k0 = np.array([[1, 0], [0, np.sqrt(1 - amp)]])
    k1 = np.array([[0, np.sqrt(amp)], [0, 0]])
    return {
        "version": "1",
        "description": "Reference maps for classify-map and decompose-map",
        "objects": {
            "identity_2": {"kind": "named_map", "name": "identity", "dim": 2,
                           "description": "CP, not coCP"},
            "transpose_2": {"kind": "named_map", "name": "transpose", "dim": 2,
                            "description": "coCP, not CP; Choi matrix is SWAP"},
            "half_identity_half_transpose_2": {
                "kind": "combination",
                "description": "decomposable with an obvious split",
                "terms": [{"coefficient": 0.5, "map": "identity_2"},
                          {"coefficient": 0.5, "map": "transpose_2"}]},
            "choi_map": {"kind": "named_map", "name": "choi_map",
                         "description": "positive, not decomposable"},
            "amplitude_damping_2": {
                "kind": "kraus", "description": "CP and trace preserving",
                "families": [{"side": "cp", "operators": [cmat(k0), cmat(k1)]}]},
            "depolarizing_3": {"kind": "named_map", "name": "depolarizing", "dim": 3,
                               "description": "CP and coCP"},
        },
    }


def generators():
    return {
        "version": "1",
        "description": "Generators for check-generator",
        "objects": {
            "gksl_2": {"kind": "generator", "picture": "heisenberg", "spec": spec(2, 2, 0),
                       "description": "GKSL generator"},
            "decomposable_3": {"kind": "generator", "picture": "heisenberg", "spec": spec(3, 2, 2),
                               "description": "CP and coCP Kraus terms"},
            "decomposable_schrodinger_2": {
                "kind": "generator", "picture": "schrodinger", "spec": spec(2, 1, 1),
                "description": "same construction, reported in the Schrodinger picture"},
            "transpose_dissipator_2": {
                "kind": "generator", "picture": "heisenberg",
                "dissipator": {"map": {"kind": "named_map", "name": "transpose", "dim": 2}},
                "description": "tau - 1/2 {tau(1), .}"},
            "nonunital_2": {
                "kind": "generator", "picture": "heisenberg",
                "nonunital": {"K": cmat(gaussian(2, 0.5)), "phi": [cmat(gaussian(2, 0.5))],
                              "psi": [cmat(gaussian(2, 0.5))]},
                "description": "phi + tau psi + K. + .K^dag"},
            "rotated_choi_dissipator": {
                "kind": "generator", "picture": "heisenberg",
                "dissipator": {"map": dict(ROTATED_CHOI), "rate": 0.5},
                "description": "fails the conditional decomposability test"},
        },
    }


def schedules():
    return {
        "version": "1",
        "description": "Piecewise-constant schedules for evolve and check-divisibility",
        "objects": {
            "zero_2": {"kind": "schedule", "horizon": 1.0,
                       "segments": [{"t": 0.0, "spec": {"H": cmat(np.zeros((2, 2)))}}],
                       "description": "zero generator"},
            "decomposable_two_segment_2": {
                "kind": "schedule", "horizon": 1.0,
                "segments": [{"t": 0.0, "spec": spec(2, 1, 1)}, {"t": 0.5, "spec": spec(2, 1, 2)}],
                "description": "decomposable generators on [0, 0.5) and [0.5, 1]"},
            "choi_negative_control_3": {
                "kind": "schedule", "horizon": 2.0,
                "segments": [{"t": 0.0, "spec": spec(3, 2, 2)},
                             {"t": 1.0, "dissipator": {"map": dict(ROTATED_CHOI), "rate": 0.5}}],
                "description": "decomposable on [0, 1), rotated Choi dissipator on [1, 2]"},
        },
    }


def main():
    for name, build in (("maps", maps), ("generators", generators), ("schedules", schedules)):
        with open(HERE / f"{name}.json", "w") as f:
            json.dump(build(), f, indent=1)
            f.write("\n")


if __name__ == "__main__":
    main()
