#!/usr/bin/env python3
"""Regenerate the group and fusion zoo files under crates/core/zoo/.

Groups are written as permutation generators plus unitary irrep matrices on
those generators. The Rust loader re-derives everything else and validates.
"""
import itertools
import json
import math
import os
import sys

import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "zoo")
W = np.exp(2j * np.pi / 3)


def perm_compose(p, q):
    # (p*q)(x) = p(q(x))
    return tuple(p[q[x]] for x in range(len(q)))


def closure(gens, mul, key):
    elems = []
    seen = set()
    for g in gens:
        if key(g) not in seen:
            seen.add(key(g))
            elems.append(g)
    i = 0
    while i < len(elems):
        for g in gens:
            h = mul(elems[i], g)
            k = key(h)
            if k not in seen:
                seen.add(k)
                elems.append(h)
        i += 1
    return elems


def mkey(m):
    return tuple((round(z.real, 8) + 0.0, round(z.imag, 8) + 0.0) for z in np.asarray(m, dtype=complex).flatten())


def regular_perms(gen_mats):
    """Left-regular permutation action of a matrix group on itself."""
    elems = closure(gen_mats, lambda a, b: a @ b, mkey)
    index = {mkey(e): i for i, e in enumerate(elems)}
    perms = []
    for g in gen_mats:
        perms.append([index[mkey(g @ e)] for e in elems])
    return perms, len(elems)


def enc(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(repr_float(z.real)), float(repr_float(z.imag))] for z in row] for row in m]


def repr_float(x):
    if abs(x) < 1e-15:
        return 0.0
    return x


def irrep(label, mats):
    mats = [np.atleast_2d(np.asarray(m, dtype=complex)) for m in mats]
    return {"label": label, "dim": int(mats[0].shape[0]), "gen_matrices": [enc(m) for m in mats]}


def perm_matrix(p):
    n = len(p)
    m = np.zeros((n, n))
    for i in range(n):
        m[p[i], i] = 1.0
    return m


def std_rep(perms):
    n = len(perms[0])
    # orthonormal basis of the sum-zero subspace
    a = np.eye(n)[:, : n - 1] - np.eye(n)[:, 1:n]
    q, _ = np.linalg.qr(a)
    return [q.T @ perm_matrix(p) @ q for p in perms]


def sign(p):
    s = 1
    seen = set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, L = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            L += 1
        if L % 2 == 0:
            s = -s
    return s


def write_group(name, degree, gens, irreps, provenance):
    doc = {
        "name": name,
        "degree": degree,
        "provenance": provenance,
        "generators": [list(g) for g in gens],
        "irreps": irreps,
    }
    with open(os.path.join(OUT, "groups", name + ".json"), "w") as fh:
        fh.write(dump_lines(doc, "irreps"))


def dump_lines(doc, listkey):
    """One top-level key per line; `listkey` entries get a line each."""
    parts = []
    for k, v in doc.items():
        if k == listkey:
            body = ",\n  ".join(json.dumps(x) for x in v)
            parts.append(f" {json.dumps(k)}: [\n  {body}\n ]")
        else:
            parts.append(f" {json.dumps(k)}: {json.dumps(v)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def cyclic(n):
    g = tuple((i + 1) % n for i in range(n))
    return g


def main():
    # C2
    write_group("C2", 2, [cyclic(2)], [irrep("1", [1]), irrep("s", [-1])], "cyclic group of order 2")
    # C3
    write_group(
        "C3", 3, [cyclic(3)],
        [irrep("1", [1]), irrep("omega", [W]), irrep("omegabar", [W.conjugate()])],
        "cyclic group of order 3",
    )
    # C4
    write_group(
        "C4", 4, [cyclic(4)],
        [irrep("1", [1]), irrep("chi", [1j]), irrep("chi2", [-1]), irrep("chi3", [-1j])],
        "cyclic group of order 4",
    )
    # S3 on 3 points: transposition (0 1), 3-cycle (0 1 2)
    t = (1, 0, 2)
    r = (1, 2, 0)
    gens = [t, r]
    write_group(
        "S3", 3, gens,
        [irrep("1", [1, 1]), irrep("sgn", [sign(t), sign(r)]), irrep("std", std_rep(gens))],
        "symmetric group on 3 points",
    )
    # D4 on the square's vertices: rotation (0 1 2 3), reflection (1 3)
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    rot = np.array([[0, -1], [1, 0]])
    ref = np.array([[1, 0], [0, -1]])
    write_group(
        "D4", 4, [r, s],
        [
            irrep("1", [1, 1]),
            irrep("A2", [1, -1]),
            irrep("B1", [-1, 1]),
            irrep("B2", [-1, -1]),
            irrep("E", [rot, ref]),
        ],
        "dihedral group of order 8 acting on square vertices",
    )
    # Q8 via its regular action; V is the defining 2-dim rep
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, -1], [1, 0]], dtype=complex)
    perms, order = regular_perms([qi, qj])
    assert order == 8
    write_group(
        "Q8", 8, perms,
        [
            irrep("1", [1, 1]),
            irrep("ri", [1, -1]),
            irrep("rj", [-1, 1]),
            irrep("rk", [-1, -1]),
            irrep("V", [qi, qj]),
        ],
        "quaternion group, left-regular permutation action",
    )
    # A4 on 4 points: (0 1 2), (0 1)(2 3)
    a = (1, 2, 0, 3)
    b = (1, 0, 3, 2)
    gens = [a, b]
    write_group(
        "A4", 4, gens,
        [
            irrep("1", [1, 1]),
            irrep("omega", [W, 1]),
            irrep("omegabar", [W.conjugate(), 1]),
            irrep("T", std_rep(gens)),
        ],
        "alternating group on 4 points",
    )
    # S4 on 4 points: (0 1), (0 1 2 3)
    t = (1, 0, 2, 3)
    c = (1, 2, 3, 0)
    gens = [t, c]
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]

    def canon(pr):
        return tuple(sorted(tuple(sorted(x)) for x in pr))

    pidx = {canon(pr): i for i, pr in enumerate(pairings)}

    def to_s3(p):
        return tuple(pidx[canon(tuple(tuple(p[x] for x in pair) for pair in pr))] for pr in pairings)

    s3_std = std_rep([to_s3(g) for g in gens])
    std = std_rep(gens)
    write_group(
        "S4", 4, gens,
        [
            irrep("1", [1, 1]),
            irrep("sgn", [sign(t), sign(c)]),
            irrep("E", s3_std),
            irrep("std", std),
            irrep("stdsgn", [sign(g) * m for g, m in zip(gens, std)]),
        ],
        "symmetric group on 4 points; E pulled back along S4 -> S3",
    )
    # SL(2,3) as the binary tetrahedral group in SU(2), left-regular action
    x = 0.5 * np.array([[1 + 1j, 1 + 1j], [-1 + 1j, 1 - 1j]])  # (1+i+j+k)/2
    y = qi  # i
    perms, order = regular_perms([x, y])
    assert order == 24

    def so3(u):
        # conjugation action on traceless anti-hermitian matrices (i sigma_k)
        basis = [
            np.array([[1j, 0], [0, -1j]]),
            np.array([[0, -1], [1, 0]], dtype=complex),
            np.array([[0, 1j], [1j, 0]]),
        ]
        m = np.zeros((3, 3))
        for k, e in enumerate(basis):
            img = u @ e @ u.conj().T
            for l, f in enumerate(basis):
                m[l, k] = np.real(np.trace(f.conj().T @ img)) / 2
        return m

    write_group(
        "SL23", 24, perms,
        [
            irrep("1", [1, 1]),
            irrep("omega", [W, 1]),
            irrep("omegabar", [W.conjugate(), 1]),
            irrep("P", [x, y]),
            irrep("Pomega", [W * x, y]),
            irrep("Pomegabar", [W.conjugate() * x, y]),
            irrep("T", [so3(x), so3(y)]),
        ],
        "SL(2,3) realized as the binary tetrahedral group, left-regular action",
    )
    write_fusion()


def cflat(m):
    return [[[float(repr_float(z.real)), float(repr_float(z.imag))] for z in row] for row in np.asarray(m, dtype=complex)]


def write_fusion_file(name, doc):
    with open(os.path.join(OUT, "fusion", name), "w") as fh:
        fh.write(dump_lines(doc, None))


def write_fusion():
    r2 = math.sqrt(2)
    ising_n = np.zeros((3, 3, 3), dtype=int)
    # 0 = 1, 1 = sigma, 2 = psi
    rules = {(0, 0): [0], (0, 1): [1], (0, 2): [2], (1, 1): [0, 2], (1, 2): [1], (2, 2): [0]}
    for (a, b), cs in rules.items():
        for c in cs:
            ising_n[a, b, c] = 1
            ising_n[b, a, c] = 1
    write_fusion_file("ising.json", {
        "labels": ["1", "sigma", "psi"],
        "unit": "1",
        "N": ising_n.tolist(),
        "dual": {"1": "1", "sigma": "sigma", "psi": "psi"},
        "nu": {"1": 1, "sigma": 1, "psi": 1},
        "S": cflat(0.5 * np.array([[1, r2, 1], [r2, 0, -r2], [1, -r2, 1]])),
        "theta": [[1.0, 0.0], [math.cos(math.pi / 8), math.sin(math.pi / 8)], [-1.0, 0.0]],
        "provenance": {"nu": "Ising category with sigma of indicator +1"},
    })
    phi = (1 + math.sqrt(5)) / 2
    fib_n = np.zeros((2, 2, 2), dtype=int)
    fib_n[0, 0, 0] = fib_n[0, 1, 1] = fib_n[1, 0, 1] = fib_n[1, 1, 0] = fib_n[1, 1, 1] = 1
    nrm = 1 / math.sqrt(2 + phi)
    write_fusion_file("fibonacci.json", {
        "labels": ["1", "tau"],
        "unit": "1",
        "N": fib_n.tolist(),
        "dual": {"1": "1", "tau": "tau"},
        "nu": {"1": 1, "tau": 1},
        "S": cflat(nrm * np.array([[1, phi], [phi, -1]])),
        "theta": [[1.0, 0.0], [math.cos(4 * math.pi / 5), math.sin(4 * math.pi / 5)]],
        "provenance": {"nu": "Fibonacci category"},
    })
    for k in (2, 4):
        labels = [f"{a // 2}" if a % 2 == 0 else f"{a}/2" for a in range(k + 1)]
        n = np.zeros((k + 1, k + 1, k + 1), dtype=int)
        for a, b, c in itertools.product(range(k + 1), repeat=3):
            if abs(a - b) <= c <= min(a + b, 2 * k - a - b) and (a + b + c) % 2 == 0:
                n[a, b, c] = 1
        s = np.array([[math.sqrt(2 / (k + 2)) * math.sin(math.pi * (a + 1) * (b + 1) / (k + 2))
                       for b in range(k + 1)] for a in range(k + 1)])
        theta = []
        for a in range(k + 1):
            h = a * (a + 2) / (4 * (k + 2))
            theta.append([math.cos(2 * math.pi * h), math.sin(2 * math.pi * h)])
        write_fusion_file(f"su2_k{k}.json", {
            "labels": labels,
            "unit": "0",
            "N": n.tolist(),
            "dual": {l: l for l in labels},
            "nu": {l: (-1) ** a for a, l in enumerate(labels)},
            "S": cflat(s),
            "theta": theta,
            "provenance": {"nu": "external", "N": "truncated Clebsch-Gordan rule at level %d" % k},
        })


if __name__ == "__main__":
    main()
