"""Regenerate the bundled H2 / HeH+ molecule files from PySCF integrals.

Run once, outside the test suite (needs ``pip install pyscf``):

    python scripts/derive_molecule_fixtures.py

Electronic energies only: nuclear repulsion is left out of the Hamiltonian,
which is what places the H2 ground state near -1.857 Hartree. The HeH+ bond
length is solved for so that its FCI electronic energy is -3.922296 Hartree.
Its 3-electron sector lies lower still (about -4.22), so the HeH+ Pauli file
adds the particle-number penalty ``1.0 * (N - 2)**2``; the 2-electron spectrum
is unchanged and becomes the global ground state.
Spin orbitals are interleaved (2k = alpha of MO k, 2k+1 = beta), so the
Hartree-Fock determinant occupies qubits 0 and 1.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from pyscf import ao2mo, fci, gto, scf
from scipy.optimize import brentq

from vqelab.pauli import (
    FermionHamiltonian,
    FermionTerm,
    dump_hamiltonian,
    exact_ground_energy,
    jordan_wigner,
    number_penalty,
    simplify,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "vqelab" / "data"
HEHP_TARGET = -3.920885005 / 0.99964037


def build(atoms, charge, bond):
    mol = gto.M(
        atom=f"{atoms[0]} 0 0 0; {atoms[1]} 0 0 {bond}",
        basis="sto-3g",
        charge=charge,
        unit="Angstrom",
        verbose=0,
    )
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    e_fci, _ = fci.FCI(mf).kernel()
    return mol, mf, e_fci - mol.energy_nuc()


def spin_orbital_terms(mol, mf, cutoff=1e-12):
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), c.shape[1])  # chemist (pq|rs)
    n_mo = c.shape[1]
    n = 2 * n_mo
    terms = []
    for p in range(n):
        for q in range(n):
            if p % 2 == q % 2 and abs(h1[p // 2, q // 2]) > cutoff:
                terms.append(FermionTerm("onebody", (p, q), h1[p // 2, q // 2]))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    # a+_p a+_q a_r a_s carries (ps|qr) when spins pair up
                    if p % 2 != s % 2 or q % 2 != r % 2:
                        continue
                    v = eri[p // 2, s // 2, q // 2, r // 2]
                    if abs(v) > cutoff:
                        terms.append(FermionTerm("twobody", (p, q, r, s), v))
    return FermionHamiltonian(n, tuple(terms))


def write(name, label, atoms, charge, bond, penalty=0.0):
    mol, mf, e_fci = build(atoms, charge, bond)
    fermion = spin_orbital_terms(mol, mf)
    qubit = jordan_wigner(fermion)
    if penalty:
        qubit = simplify(qubit + number_penalty(fermion.n_orbitals, mol.nelectron, penalty))
    e_min = exact_ground_energy(qubit)
    assert abs(e_min - e_fci) < 1e-9, (e_min, e_fci)
    header = [
        f"{label}, STO-3G, bond length {bond:.6f} Angstrom, RHF molecular orbitals (PySCF).",
        "Electronic Hamiltonian: nuclear repulsion NOT included.",
        f"nuclear repulsion (for reference) = {float(mol.energy_nuc())!r} Hartree",
        f"PySCF FCI electronic energy = {float(e_fci)!r} Hartree",
        "Spin orbitals interleaved: qubit 2k = alpha(MO k), qubit 2k+1 = beta(MO k).",
        "Jordan-Wigner mapping, qubit 0 leftmost.",
    ]
    (DATA / f"{name}.fermion").write_text(dump_hamiltonian(fermion, header))
    if penalty:
        header.append(
            f"Pauli form adds {penalty!r} * (N - {mol.nelectron})**2 (number penalty) "
            "so the FCI state is the global ground state."
        )
    (DATA / f"{name}.pauli").write_text(dump_hamiltonian(qubit, header))
    print(f"{label}: R={bond:.6f}  FCI={e_fci:.9f}  min eig={e_min:.9f}  terms={len(qubit)}")


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    write("h2", "H2", ("H", "H"), 0, 0.735)
    bond = brentq(lambda r: build(("He", "H"), 1, r)[2] - HEHP_TARGET, 0.95, 1.05, xtol=1e-10)
    write("hehp", "HeH+", ("He", "H"), 1, round(bond, 6), penalty=1.0)


if __name__ == "__main__":
    main()
