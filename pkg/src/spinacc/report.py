"""Classification reports (JSON) with certificates."""

from __future__ import annotations

import json
import random

import numpy as np

from . import acceptability, linalg, modrep
from .group_engine import MorphismInstance

REPORT_VERSION = 1


def _vec_json(v):
    return [x.to_json() for x in v]


def _one_copy_basis(G: MorphismInstance, dec, i, seed=0):
    """Rows (mod p) spanning one copy of constituent i."""
    p = dec.ctx.p
    c = dec.constituents[i]
    P = c.proj
    if c.mult == 1:
        return linalg.row_basis_mod(P.T, p)
    red = modrep.reduced_matrices(G, dec.ctx)
    gens = [red[g] for g in G.gen_elems]
    C = modrep.commutant_basis(gens, p)
    rng = random.Random(f"copy:{seed}:{p}:{i}")
    n = G.n
    for _ in range(20):
        z = sum(rng.randrange(p) * Ck for Ck in C) % p
        z = P @ z % p @ P % p
        for lam in modrep._roots_mod(modrep._charpoly_mod(z, p), p):
            if lam == 0:
                continue
            K = linalg.nullspace_mod((z - lam * np.eye(n, dtype=np.int64)) % p, p)
            if len(K) == c.dim:
                return K
    raise modrep.BadPrime("could not isolate a single copy of a constituent")


def build_report(G: MorphismInstance, cl=None, analysis=None, primes=2, seed=0):
    if cl is None and G.n == 7:
        cl = acceptability.classify(G, primes, seed, analysis)
    a = cl.analysis if cl is not None else (analysis or acceptability.analyze(G, primes, seed))
    name = G.char_name
    dec = a.dec
    chars = [{"name": name(c), "signs": list(c.on_generators())} for c in a.chars]
    reps = G.class_reps()
    words = [list(G.words[x]) for x in reps]
    u1 = {}
    for c in a.chars:
        ok, cert = a.U1[c]
        if ok:
            u1[name(c)] = [{"class": ci, "eigenvalue": int(c(reps[ci])), "vector": _vec_json(v)}
                           for ci, v in sorted(cert.items())]
    xcert = {}
    copies = {}
    for c in a.X:
        idx = sorted(a.x_cert[c])
        xcert[name(c)] = idx
        for i in idx:
            if str(i) not in copies:
                copies[str(i)] = _one_copy_basis(G, dec, i, seed).tolist()
    ycert = {name(c): [_vec_json(v) for v in a.y_basis[c]] for c in a.Y}
    rep = {
        "version": REPORT_VERSION,
        "instance": {
            "name": G.name, "n": G.n, "M": G.M, "order": G.order, "level": G.level,
            "generators": list(G.gen_names), "construct": getattr(G, "recipe", None),
            "abelian_invariants": G.abelian_invariants(),
        },
        "seed": seed,
        "primes": [d.ctx.p for d in a.decs],
        "verdict": "unacceptable" if a.unacceptable else "acceptable",
        "characters": chars,
        "X": [name(c) for c in a.X],
        "Y": {name(c): int(m) for c, m in a.Y.items()},
        "E": [name(c) for c in a.E],
        "decomposition": [d.to_json() for d in a.decs],
        "discrete": acceptability.is_discrete(a),
        "stable": acceptability.is_stable(a),
        "types": [t.to_json() for t in cl.tags] if cl is not None else None,
        "certificates": {
            "class_words": words,
            "U1": u1,
            "X": xcert,
            "X_copies": {"p": dec.ctx.p, "constituent_dims": [c.dim for c in dec.constituents],
                         "bases": copies},
            "Y": ycert,
        },
    }
    return rep


def dumps(report, pretty=True):
    return json.dumps(report, sort_keys=True, indent=2 if pretty else None)


def loads(text):
    return json.loads(text)


def render_text(report):
    lines = []
    ins = report["instance"]
    lines.append(f"instance {ins['name']}: n = {ins['n']}, M = {ins['M']}, |image| = {ins['order']}")
    lines.append(f"verdict: {report['verdict']}")
    lines.append("X(r) = {" + ", ".join(report["X"]) + "}")
    lines.append("Y(r) = {" + ", ".join(f"{k}:{v}" for k, v in report["Y"].items()) + "}")
    lines.append("E(r) = {" + ", ".join(report["E"]) + "}")
    if report.get("types"):
        tags = []
        for t in report["types"]:
            if t["type"] == "I":
                tags.append("I")
            else:
                tags.append(f"{t['type']}(chi={t['chi']}, eta={t['eta']})")
        lines.append("types: " + ", ".join(tags))
    lines.append(f"discrete: {report['discrete']}, stable: {report['stable']}")
    for d in report["decomposition"][:1]:
        parts = []
        for c in d["constituents"]:
            fs = {1: "R", 0: "C", -1: "H"}[c["fs"]]
            det = c["det"] or "-"
            parts.append(f"{c['dim']}x{c['mult']}[{fs},det={det}]")
        lines.append(f"E at p = {d['p']}: " + " + ".join(parts))
    return "\n".join(lines)
