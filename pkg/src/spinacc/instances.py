"""Instance files (JSON) and construct strings.

An instance file looks like

    {"name": "...", "n": 7, "M": 8, "level": "so",
     "generators": [ {"rotation": {"plane": [4, 5], "num": 1, "den": 4}},
                     {"product": [{"z_B": [2, 3]}, {"rotation": ...}]},
                     {"reflection_pair": [[1, 0, ...], [0, 1, ...]]},
                     {"matrix": [[...], ...]},
                     {"construct": "ical:A4"} ],
     "labels": {"chi": [1, -1]},
     "options": {"max_order": 100000, "prime_count": 2, "seed": 0}}

Entries are ints, "p/q" strings or {"M": .., "coeffs": [[num, den], ..]}.
A generator may carry "name" and a scalar tag {"zeta_pow": k}; any scalar tag
turns the instance into a GSpin one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import CycNum, CycMatrix, CyclotomicError, sqrt_exact
from .clifford import (CliffordError, LiftUnavailable, SpinElement, lift_orthogonal, pi_action,
                       rotor, z_B)
from .group_engine import MorphismInstance, NotOrthogonal, DEFAULT_MAX_ORDER
from . import constructions as C


class InstanceError(ValueError):
    def __init__(self, where, msg):
        super().__init__(f"{where}: {msg}")
        self.where = where


# ---------------------------------------------------------------------------
# construct strings  name[:arg][:key=value]...

def _num(s):
    try:
        return int(s)
    except ValueError:
        return s


def parse_construct(text):
    parts = text.split(":")
    name, args, kw = parts[0].strip(), [], {}
    for p in parts[1:]:
        if "=" in p:
            k, v = p.split("=", 1)
            kw[k.strip()] = _num(v.strip())
        elif p:
            args.append(_num(p.strip()))
    return name, args, kw


def _build_h123(i, d=4):
    return C.h123_instance(int(i), int(d))


CONSTRUCTS = {
    "example1": lambda level="spin": C.example1(level),
    "trivial": lambda n=7, M=4: C.trivial_instance(int(n), int(M)),
    "gcal": lambda d=4: C.gcal_instance(int(d)),
    "gprime": lambda d=4, var=0: C.gprime_instance(int(d), int(var)),
    "h123": _build_h123,
    "hcal": lambda d=3: C.hcal_instance(int(d)),
    "ical": lambda H="A4", max_order=None: C.ical_instance(H, max_order),
    "both_types": lambda: C.both_types_instance(),
}


def build_construct(text, max_order=None):
    name, args, kw = parse_construct(text)
    if name not in CONSTRUCTS:
        raise InstanceError("construct", f"unknown builder {name!r}; known: {', '.join(sorted(CONSTRUCTS))}")
    if name == "ical" and max_order is not None:
        kw.setdefault("max_order", max_order)
    try:
        G = CONSTRUCTS[name](*args, **kw)
    except TypeError as e:
        raise InstanceError("construct", f"bad parameters for {name}: {e}") from None
    if getattr(G, "recipe", None) is None:
        G.recipe = {"construct": text}
    return G


# ---------------------------------------------------------------------------
# instance files

@dataclass
class ParsedInstance:
    instance: MorphismInstance
    scalars: list | None = None  # zeta exponents, one per generator, when tagged
    options: dict = field(default_factory=dict)
    source: dict | None = None


def _entry(x, M, where):
    if isinstance(x, bool):
        raise InstanceError(where, "booleans are not numbers")
    if isinstance(x, int):
        return CycNum.from_rational(M, x)
    if isinstance(x, str):
        try:
            return CycNum.from_rational(M, Fraction(x))
        except (ValueError, ZeroDivisionError):
            raise InstanceError(where, f"cannot parse number {x!r}") from None
    if isinstance(x, dict):
        try:
            v = CycNum.from_json(x)
        except (KeyError, TypeError, ValueError, CyclotomicError) as e:
            raise InstanceError(where, f"bad cyclotomic number: {e}") from None
        if v.M != M:
            if M % v.M:
                raise InstanceError(where, f"entry lives in Q(zeta_{v.M}), not inside Q(zeta_{M})")
            v = _lift(v, M)
        return v
    raise InstanceError(where, f"unsupported entry {x!r}")


def _lift(v, M):
    from .cyclotomic import root_of_unity
    z = root_of_unity(M, M // v.M)
    out = CycNum.zero(M)
    for k, c in enumerate(v.coeffs):
        if c:
            out = out + z ** k * CycNum.from_rational(M, c)
    return out


def _unit(vec, n, M, where):
    if not isinstance(vec, list) or len(vec) != n:
        raise InstanceError(where, f"vector of length {n} expected")
    v = [_entry(x, M, f"{where}[{i}]") for i, x in enumerate(vec)]
    nn = sum((a * a for a in v), CycNum.zero(M))
    if nn.is_zero():
        raise InstanceError(where, "zero vector")
    r = sqrt_exact(nn)
    if r is None:
        raise InstanceError(where, "vector norm has no square root in the field")
    return [a / r for a in v]


def _atom(g, n, M, where):
    """Returns (matrix, lift or None)."""
    if not isinstance(g, dict):
        raise InstanceError(where, "generator must be an object")
    kinds = [k for k in ("rotation", "reflection_pair", "matrix", "z_B", "product") if k in g]
    if len(kinds) != 1:
        raise InstanceError(where, "exactly one of rotation, reflection_pair, matrix, z_B, product expected")
    kind = kinds[0]
    body = g[kind]
    w = f"{where}.{kind}"
    try:
        if kind == "rotation":
            if not isinstance(body, dict):
                raise InstanceError(w, "object with plane, num, den expected")
            for key in ("plane", "num", "den"):
                if key not in body:
                    raise InstanceError(f"{w}.{key}", "missing")
            plane = body["plane"]
            if not (isinstance(plane, list) and len(plane) == 2 and all(isinstance(i, int) for i in plane)):
                raise InstanceError(f"{w}.plane", "two coordinates expected")
            i, j = plane
            if not (1 <= i <= n and 1 <= j <= n and i != j):
                raise InstanceError(f"{w}.plane", f"coordinates must be distinct in 1..{n}")
            k, m = int(body["num"]), int(body["den"])
            if m <= 0:
                raise InstanceError(f"{w}.den", "must be positive")
            if i > j:
                i, j, k = j, i, -k
            s = SpinElement.identity(n, M) if k % m == 0 else rotor(n, M, (i, j), k, m)
            return pi_action(s), s
        if kind == "z_B":
            s = z_B(n, M, body)
            return pi_action(s), s
        if kind == "reflection_pair":
            if not (isinstance(body, list) and len(body) == 2):
                raise InstanceError(w, "two vectors expected")
            u = _unit(body[0], n, M, f"{w}[0]")
            v = _unit(body[1], n, M, f"{w}[1]")
            s = SpinElement([u, v], n, M)
            return pi_action(s), s
        if kind == "matrix":
            if not (isinstance(body, list) and len(body) == n and all(isinstance(r, list) and len(r) == n for r in body)):
                raise InstanceError(w, f"{n} x {n} rows expected")
            A = CycMatrix.from_rows([[_entry(x, M, f"{w}[{a}][{b}]") for b, x in enumerate(r)]
                                     for a, r in enumerate(body)], M)
            try:
                s = lift_orthogonal(A)
            except LiftUnavailable:
                s = None
            except CliffordError as e:
                raise InstanceError(w, str(e)) from None
            if s is not None and s.parity:
                raise InstanceError(w, "matrix has determinant -1")
            return A, s
        # product
        if not isinstance(body, list) or not body:
            raise InstanceError(w, "nonempty list of atoms expected")
        A = CycMatrix.identity(M, n)
        s = SpinElement.identity(n, M)
        for t, sub in enumerate(body):
            B, sb = _atom(sub, n, M, f"{w}[{t}]")
            A = A @ B
            s = s * sb if (s is not None and sb is not None) else None
        return A, s
    except CliffordError as e:
        raise InstanceError(w, str(e)) from None


def parse_instance(obj, max_order=None) -> ParsedInstance:
    if not isinstance(obj, dict):
        raise InstanceError("$", "top level must be an object")
    opts = dict(obj.get("options") or {})
    for k in opts:
        if k not in ("max_order", "prime_count", "seed"):
            raise InstanceError(f"options.{k}", "unknown option")
    bound = max_order or opts.get("max_order") or DEFAULT_MAX_ORDER
    if "construct" in obj:
        G = build_construct(obj["construct"], max_order=bound)
        return ParsedInstance(G, None, opts, obj)
    for key in ("n", "M", "generators"):
        if key not in obj:
            raise InstanceError(key, "missing")
    n, M = obj["n"], obj["M"]
    if not isinstance(n, int) or n % 2 == 0 or not 3 <= n <= 9:
        raise InstanceError("n", "odd integer between 3 and 9 expected")
    if not isinstance(M, int) or M <= 0 or M % 4:
        raise InstanceError("M", "positive multiple of 4 expected")
    gens = obj["generators"]
    if not isinstance(gens, list) or not gens:
        raise InstanceError("generators", "nonempty list expected")
    mats, lifts, names, scalars = [], [], [], []
    tagged = False
    for idx, g in enumerate(gens):
        where = f"generators[{idx}]"
        if isinstance(g, dict) and "construct" in g:
            H = build_construct(g["construct"], max_order=bound)
            if H.n != n or M % H.M:
                raise InstanceError(where, "construct does not fit n and M")
            if H.M != M:
                raise InstanceError(where, f"construct uses M = {H.M}; set M to match")
            mats += H.gens
            lifts += H.lifts if H.lifts is not None else [None] * len(H.gens)
            names += H.gen_names
            scalars += [0] * len(H.gens)
            continue
        g = dict(g) if isinstance(g, dict) else g
        name = g.pop("name", None) if isinstance(g, dict) else None
        zp = g.pop("zeta_pow", None) if isinstance(g, dict) else None
        A, s = _atom(g, n, M, where)
        mats.append(A)
        lifts.append(s)
        names.append(name or f"g{len(names) + 1}")
        if zp is not None:
            if not isinstance(zp, int):
                raise InstanceError(f"{where}.zeta_pow", "integer expected")
            tagged = True
        scalars.append(int(zp or 0))
    if any(s is None for s in lifts):
        lifts = None
    level = obj.get("level", "so")
    if level not in ("so", "spin"):
        raise InstanceError("level", "'so' or 'spin' expected")
    if level == "spin" and lifts is None:
        raise InstanceError("level", "spin level needs liftable generators")
    labels = {}
    for k, v in (obj.get("labels") or {}).items():
        if not (isinstance(v, list) and len(v) == len(mats) and all(x in (1, -1) for x in v)):
            raise InstanceError(f"labels.{k}", "sign vector on the generators expected")
        labels[k] = tuple(v)
    try:
        G = MorphismInstance(n, M, mats, lifts=lifts, name=obj.get("name", "instance"), labels=labels,
                             gen_names=names, level=level, max_order=bound)
    except NotOrthogonal as e:
        raise InstanceError("generators", str(e)) from None
    G.recipe = {"file": obj.get("name", "instance")}
    if tagged and lifts is None:
        raise InstanceError("generators", "scalar tags need liftable generators")
    return ParsedInstance(G, scalars if tagged else None, opts, obj)


def load_instance(path, max_order=None) -> ParsedInstance:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise InstanceError(str(path), e.strerror) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    return parse_instance(obj, max_order)


def _cyc_json(x: CycNum):
    if x.is_rational():
        q = x.rational()
        return int(q) if q.denominator == 1 else str(q)
    return x.to_json()


def instance_to_json(G: MorphismInstance, scalars=None):
    """Serialize as matrix generators (lifts are recomputed on load)."""
    gens = []
    for j, A in enumerate(G.gens):
        g = {"name": G.gen_names[j], "matrix": [[_cyc_json(x) for x in r] for r in A.rows()]}
        if scalars is not None:
            g["zeta_pow"] = int(scalars[j])
        gens.append(g)
    out = {"name": G.name, "n": G.n, "M": G.M, "level": "so", "generators": gens}
    if G.labels:
        out["labels"] = {k: list(v) for k, v in G.labels.items()}
    return out
