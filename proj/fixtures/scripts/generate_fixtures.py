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
"""Regenerate the committed integral fixtures with PySCF.

Targets:
    h2-sto6g    H2/STO-6G bundles, B2 = B1 (15 geometries)
    h2-ccpvdz   H2/cc-pVDZ bundles, B2 = atomic HF 1s (15 geometries)
    nh3-ccpvdz  single NH3/cc-pVDZ bundle, B2 = atomic HF core+valence
    nh3-iao     NH3 IAO/<basis> FCIDUMPs along the relaxed path in
                fixtures/nh3/geometries.txt (slow for aug-cc-pVQZ)

The 2-qubit HONO/LUNO Hamiltonians are produced from the nh3-iao FCIDUMPs by
`iaoq fold` (see fixtures/README.md).
"""
import argparse
import json
import os
import zlib

import numpy as np
from pyscf import ao2mo, gto, scf
from pyscf.scf import atom_hf
from pyscf.tools import fcidump

H2_GRID = [0.30, 0.50, 0.60, 0.65, 0.70, 0.74, 0.80, 0.90, 1.00, 1.20,
           1.50, 1.80, 2.20, 2.60, 3.00]


def write_blob(directory, name, array):
    data = np.ascontiguousarray(array, dtype="<f8").tobytes()
    fname = name + ".bin"
    with open(os.path.join(directory, fname), "wb") as f:
        f.write(data)
    return {"file": fname, "shape": list(array.shape), "crc32": zlib.crc32(data)}


def atomic_reference(mol):
    """Occupied single-atom HF orbitals placed block-wise in the AO basis."""
    atm = atom_hf.get_atm_nrhf(mol)
    offsets = mol.aoslice_by_atom()
    cols = []
    for ia in range(mol.natm):
        sym = mol.atom_pure_symbol(ia)
        _, _, c, occ = atm[sym]
        p0, p1 = offsets[ia][2], offsets[ia][3]
        for k in np.where(occ > 0)[0]:
            v = np.zeros(mol.nao)
            v[p0:p1] = c[:, k]
            cols.append(v)
    return np.array(cols).T


def save_bundle(directory, mol, mf, ref, r, basis_b2):
    os.makedirs(directory, exist_ok=True)
    s1 = mol.intor("int1e_ovlp")
    if ref is None:
        s12, s2 = s1, s1
    else:
        s12 = s1 @ ref
        s2 = ref.T @ s1 @ ref
    n_occ = int(np.count_nonzero(mf.mo_occ > 0))
    blobs = {
        "s1": write_blob(directory, "s1", s1),
        "s12": write_blob(directory, "s12", s12),
        "s2": write_blob(directory, "s2", s2),
        "hcore": write_blob(directory, "hcore", mf.get_hcore()),
        "eri": write_blob(directory, "eri", ao2mo.restore(8, mol.intor("int2e"), mol.nao)),
        "dipole": write_blob(directory, "dipole", mol.intor("int1e_r")),
        "mo_coeff": write_blob(directory, "mo_coeff", mf.mo_coeff),
    }
    manifest = {
        "format": "iaoq-bundle",
        "version": 1,
        "n_b1": int(mol.nao),
        "n_b2": int(s2.shape[0]),
        "n_mo": int(mf.mo_coeff.shape[1]),
        "n_occ": n_occ,
        "e_nuc": float(mol.energy_nuc()),
        "eri_layout": "s8",
        "meta": {
            "elements": [mol.atom_pure_symbol(i) for i in range(mol.natm)],
            "coords_angstrom": mol.atom_coords(unit="Angstrom").tolist(),
            "R": r,
            "basis_b1": mol.basis if isinstance(mol.basis, str) else "custom",
            "basis_b2": basis_b2,
            "e_rhf": float(mf.e_tot),
        },
        "blobs": blobs,
    }
    with open(os.path.join(directory, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=1)


def write_grid(out, entries):
    with open(os.path.join(out, "grid.json"), "w") as f:
        json.dump({"entries": entries}, f, indent=1)


def h2_grid(out, basis, with_ref):
    entries = []
    dm = None
    for r in H2_GRID:
        mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis=basis, unit="Angstrom",
                    verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel(dm0=dm)
        dm = mf.make_rdm1()
        ref = atomic_reference(mol) if with_ref else None
        name = f"r{r:.2f}"
        save_bundle(os.path.join(out, name), mol, mf, ref, r,
                    "atomic-hf" if with_ref else basis)
        entries.append({"R": r, "path": name, "kind": "bundle"})
        print(f"{basis} R={r:.2f} E_RHF={mf.e_tot:.10f}", flush=True)
    write_grid(out, entries)


def read_geometries(path):
    blocks, cur = [], None
    with open(path) as f:
        for line in f:
            t = line.split()
            if not t:
                continue
            if t[0] == "#":
                cur = (float(t[2]), [])
                blocks.append(cur)
            else:
                cur[1].append((t[0], tuple(float(x) for x in t[1:4])))
    return blocks


def lowdin(c, s):
    w, v = np.linalg.eigh(c.T @ s @ c)
    return c @ v @ np.diag(w ** -0.5) @ v.T


def iao_coefficients(s1, s12, s2, c_occ):
    # Same projector recipe as the C++ build_iao.
    p12 = np.linalg.solve(s1, s12)
    ctil = p12 @ np.linalg.solve(s2, s12.T @ c_occ)
    ctil = lowdin(ctil, s1)
    cc = c_occ @ c_occ.T
    ctc = ctil @ ctil.T
    eye = np.eye(s1.shape[0])
    return cc @ s1 @ ctc @ s12 + (eye - cc @ s1) @ (eye - ctc @ s1) @ p12


def nh3_iao(out, geometries, basis):
    os.makedirs(out, exist_ok=True)
    entries = []
    dm = None
    for r, atoms in read_geometries(geometries):
        mol = gto.M(atom=atoms, basis=basis, unit="Angstrom", verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-10
        mf.kernel(dm0=dm)
        dm = mf.make_rdm1()
        s1 = mol.intor("int1e_ovlp")
        ref = atomic_reference(mol)
        occ = mf.mo_occ > 0
        c_occ = mf.mo_coeff[:, occ]
        a = lowdin(iao_coefficients(s1, s1 @ ref, ref.T @ s1 @ ref, c_occ), s1)
        # Orthonormal basis of the IAO span: canonical occupied MOs followed
        # by the valence virtuals diagonalizing the Fock operator.
        vv = a - c_occ @ (c_occ.T @ s1 @ a)
        g, v = np.linalg.eigh(vv.T @ s1 @ vv)
        n_vv = a.shape[1] - c_occ.shape[1]
        keep = np.argsort(g)[::-1][:n_vv]
        vvirt = vv @ v[:, keep] @ np.diag(g[keep] ** -0.5)
        sv = np.sort(g[keep])
        f = mf.get_fock()
        e, w = np.linalg.eigh(vvirt.T @ f @ vvirt)
        vvirt = vvirt @ w
        c = np.hstack([c_occ, vvirt])
        h1 = c.T @ mf.get_hcore() @ c
        eri = ao2mo.kernel(mol, c, compact=True)
        name = f"r{r:.2f}.fcidump"
        fcidump.from_integrals(os.path.join(out, name), h1, eri, c.shape[1],
                               mol.nelectron, mol.energy_nuc(), 0,
                               tol=1e-15, float_format=" %.17e")
        entries.append({"R": r, "path": name, "kind": "fcidump",
                        "e_rhf": float(mf.e_tot)})
        print(f"NH3 {basis} R={r:.2f} E_RHF={mf.e_tot:.10f} "
              f"n_iao={a.shape[1]} gram_min={sv[0]:.3e}", flush=True)
    write_grid(out, entries)


def nh3_single(out):
    atoms = read_geometries(os.path.join(FIXTURES, "nh3", "geometries.txt"))
    r, geo = min(atoms, key=lambda b: abs(b[0] - 1.0))
    mol = gto.M(atom=geo, basis="cc-pvdz", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    save_bundle(out, mol, mf, atomic_reference(mol), r, "atomic-hf")
    print(f"NH3 cc-pVDZ R={r:.2f} E_RHF={mf.e_tot:.10f}")


FIXTURES = os.path.normpath(os.path.join(os.path.dirname(__file__), ".."))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("targets", nargs="+",
                    choices=["h2-sto6g", "h2-ccpvdz", "nh3-ccpvdz", "nh3-iao"])
    ap.add_argument("--nh3-basis", default="aug-cc-pvqz")
    args = ap.parse_args()
    for t in args.targets:
        if t == "h2-sto6g":
            h2_grid(os.path.join(FIXTURES, "h2_sto6g"), "sto-6g", False)
        elif t == "h2-ccpvdz":
            h2_grid(os.path.join(FIXTURES, "h2_ccpvdz"), "cc-pvdz", True)
        elif t == "nh3-ccpvdz":
            nh3_single(os.path.join(FIXTURES, "nh3_ccpvdz"))
        else:
            tag = args.nh3_basis.replace("-", "")
            nh3_iao(os.path.join(FIXTURES, "nh3", f"iao_{tag}"),
                    os.path.join(FIXTURES, "nh3", "geometries.txt"),
                    args.nh3_basis)


if __name__ == "__main__":
    main()
