#!/usr/bin/env python3
# Copyright 2026 The iaoq Authors
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
"""Relaxed NH3 -> NH2 + H reaction path.

For every N-H distance R the remaining coordinates are optimized at the
MP2/aug-cc-pVTZ level with the breaking bond held fixed. Output is a
geometry file with one block per R:

    # R <value>
    N x y z
    H x y z
    ...

Requires pyscf and geometric. Takes about an hour on one core.
"""
import argparse
import os
import tempfile

import numpy as np
from pyscf import gto, mp, scf
from pyscf.geomopt.geometric_solver import optimize

GRID = [0.70, 0.80, 0.90, 0.95, 1.00, 1.05, 1.10, 1.25, 1.50, 1.75, 2.00, 2.50, 3.00]


def start_geometry(r):
    # Pyramidal NH3 around N at the origin; the last H is the one pulled away.
    bond, hnh = 1.012, np.deg2rad(106.5)
    theta = np.arccos(np.sqrt((1 + 2 * np.cos(hnh)) / 3))
    dirs = []
    for k in range(3):
        phi = 2 * np.pi * k / 3
        dirs.append([np.sin(np.pi - theta) * np.cos(phi),
                     np.sin(np.pi - theta) * np.sin(phi),
                     np.cos(np.pi - theta)])
    dirs = np.array(dirs)
    pos = [("N", np.zeros(3))]
    pos.append(("H", bond * dirs[0]))
    pos.append(("H", bond * dirs[1]))
    pos.append(("H", r * dirs[2]))
    return pos


def relax(r, basis):
    atoms = start_geometry(r)
    mol = gto.M(atom=[(e, tuple(x)) for e, x in atoms], basis=basis,
                unit="Angstrom", verbose=0)
    with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
        f.write("$freeze\ndistance 1 4\n")
        cfile = f.name
    try:
        solver = mp.MP2(scf.RHF(mol))
        mol_eq = optimize(solver, constraints=cfile, maxsteps=100)
    finally:
        os.unlink(cfile)
    coords = mol_eq.atom_coords(unit="Angstrom")
    return [(mol_eq.atom_symbol(i), coords[i]) for i in range(mol_eq.natm)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--basis", default="aug-cc-pvtz")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    with open(args.out, "w") as out:
        for r in GRID:
            atoms = relax(r, args.basis)
            dist = np.linalg.norm(atoms[3][1] - atoms[0][1])
            out.write(f"# R {r:.4f}\n")
            for sym, x in atoms:
                out.write(f"{sym} {x[0]:.10f} {x[1]:.10f} {x[2]:.10f}\n")
            out.flush()
            print(f"R={r:.3f} relaxed, N-H4={dist:.6f}", flush=True)


if __name__ == "__main__":
    main()
