"""Command line: classify, construct, verify-paper.

Exit codes: 0 acceptable (or all checks passed), 10 unacceptable, 2 input
error or closure bound exceeded, 1 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptability as acc
from . import gspin, instances, report, verify
from .clifford import spin_rep
from .cyclotomic import CycMatrix, root_of_unity
from .group_engine import GroupTooLarge, DEFAULT_MAX_ORDER

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNACCEPTABLE = 10


def _spin_blocks(G):
    rep = spin_rep(G.n, G.M)
    return [rep.matrix(s) for s in G.lifts]


def _verify(G, rep, extra=None):
    blocks = extra
    if blocks is None and G.level == "spin":
        blocks = _spin_blocks(G)
    return verify.verify_report(G.gens, rep, spin_gens=blocks)


def classify_instance(G, scalars=None, seed=0, primes=2, check=False, max_order=DEFAULT_MAX_ORDER):
    """Report dict for a parsed instance; GSpin-tagged instances go through Gamma(r)."""
    if scalars is None:
        cl = acc.classify(G, primes, seed) if G.n == 7 else None
        rep = report.build_report(G, cl, analysis=None if cl else acc.analyze(G, primes, seed),
                                  primes=primes, seed=seed)
        if check:
            rep["certificates_verified"] = _verify(G, report.loads(report.dumps(rep)))
        return rep
    gi = gspin.GSpinInstance(G, scalars, name=G.name, max_order=max_order)
    v = gspin.gspin_acceptable(gi, primes, seed)
    Gr = gi.gamma_r()
    cl = acc.classify(Gr, primes, seed) if Gr.n == 7 else None
    rep = report.build_report(Gr, cl, analysis=None if cl else acc.analyze(Gr, primes, seed),
                              primes=primes, seed=seed)
    rep["gspin"] = {
        "scalars": list(gi.scalars),
        "order_gamma": v.order_gamma,
        "order_gamma_r": v.order_gamma_r,
        "verdict_direct": "unacceptable" if v.direct else "acceptable",
        "verdict_rS": "unacceptable" if v.via_rS else "acceptable",
    }
    rep["verdict"] = rep["gspin"]["verdict_rS"]
    if check:
        # Gamma(r) is faithfully seen on E + S + the scalar line
        rs = spin_rep(G.n, G.M)
        extra = []
        for j, x in enumerate(Gr.gen_elems):
            s, k = Gr.pairs[x]
            S = gi.cover.spin_matrix(s)
            extra.append(S.block_diag(CycMatrix.from_rows([[root_of_unity(G.M, k)]], G.M)))
        rep["certificates_verified"] = _verify(Gr, report.loads(report.dumps(rep)), extra)
    return rep


def cmd_classify(args):
    try:
        if args.construct:
            G = instances.build_construct(args.construct, max_order=args.max_order)
            parsed = instances.ParsedInstance(G)
        elif args.file:
            parsed = instances.load_instance(args.file, max_order=args.max_order)
        else:
            raise instances.InstanceError("classify", "an instance file or --construct is needed")
    except instances.InstanceError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except GroupTooLarge as e:
        print(f"input error: group order exceeds max_order = {e.bound}", file=sys.stderr)
        return EXIT_INPUT
    opts = parsed.options
    seed = args.seed if args.seed is not None else opts.get("seed", 0)
    primes = args.primes if args.primes is not None else opts.get("prime_count", 2)
    bound = args.max_order or opts.get("max_order") or DEFAULT_MAX_ORDER
    try:
        rep = classify_instance(parsed.instance, parsed.scalars, seed, primes, args.verify_certificates,
                                max_order=bound)
    except GroupTooLarge as e:
        print(f"input error: group order exceeds max_order = {e.bound}", file=sys.stderr)
        return EXIT_INPUT
    except verify.CertificateError as e:
        print(f"certificate verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        print(report.dumps(rep))
    else:
        print(report.render_text(rep))
        if "gspin" in rep:
            g = rep["gspin"]
            print(f"GSpin: |Gamma| = {g['order_gamma']}, |Gamma(r)| = {g['order_gamma_r']}, "
                  f"direct {g['verdict_direct']}, via r_S {g['verdict_rS']}")
        if args.verify_certificates:
            print("certificates verified: " + ", ".join(rep["certificates_verified"]))
    return EXIT_UNACCEPTABLE if rep["verdict"] == "unacceptable" else EXIT_OK


def cmd_construct(args):
    try:
        G = instances.build_construct(args.name, max_order=args.max_order)
    except instances.InstanceError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (GroupTooLarge, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(instances.instance_to_json(G), indent=2))
    else:
        print(f"{G.name}: n = {G.n}, M = {G.M}, |image| = {G.order}, level = {G.level}")
        print("generators: " + ", ".join(G.gen_names))
        for k, v in G.labels.items():
            print(f"  {k} = {list(v)}")
    return EXIT_OK


def cmd_verify_paper(args):
    from . import corpus_checks
    try:
        results = corpus_checks.run_checks(only=args.only, seed=args.seed or 0,
                                          primes=args.primes or 2)
    except KeyError as e:
        print(f"input error: {e.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    ok = all(r.ok for r in results)
    if args.json:
        print(json.dumps({"ok": ok, "checks": [r.to_json() for r in results]}, indent=2))
    else:
        w = max(len(r.id) for r in results)
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.id:<{w}}  {r.seconds:6.2f}s  {r.title}")
            if not r.ok:
                print(f"      {r.detail}")
        print(f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="spinacc", description="Acceptability of finite-image Spin(n) morphisms")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--max-order", type=int, default=None, dest="max_order")
        sp.add_argument("--primes", type=int, default=None)

    c = sub.add_parser("classify", help="classify an instance file")
    c.add_argument("file", nargs="?")
    c.add_argument("--construct", default=None, help="builder name with parameters, e.g. ical:A4")
    c.add_argument("--verify-certificates", action="store_true", dest="verify_certificates")
    common(c)
    c.set_defaults(func=cmd_classify)

    b = sub.add_parser("construct", help="build a named instance")
    b.add_argument("name")
    common(b)
    b.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify-paper", help="run the verification corpus")
    v.add_argument("--only", default=None)
    common(v)
    v.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
