"""Command line front end: ``mcdeform <command> ...``.

Exit codes: 0 success, 2 validation failure, 3 nonzero obstruction,
4 parse error.  Any DGLA argument may be a file or ``zoo:NAME``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import textformat as tf
from .artin import CdgaMap, classify_surjection, dual_numbers, truncated_polynomial
from .complexes import CochainComplex
from .dgla import DGLA, coefficient_extension
from .errors import (DimensionError, HostMismatchError, InsufficientTruncationError,
                     ParseError, ValidationError)

EXIT_OK, EXIT_INVALID, EXIT_OBSTRUCTED, EXIT_PARSE = 0, 2, 3, 4


class _Result:
    def __init__(self, data: dict, lines: list[str], code: int = EXIT_OK):
        self.data, self.lines, self.code = data, lines, code


def _q(x) -> str:
    return tf.format_rational(x)


def _read(path: str):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_dgla(arg: str) -> DGLA:
    if arg.startswith("zoo:"):
        from .zoo import named
        try:
            return named(arg[4:])
        except KeyError as exc:
            raise ValidationError(str(exc)) from exc
    obj = tf.loads(_read(arg))
    if not isinstance(obj, DGLA):
        raise ValidationError(f"{arg} does not describe a DGLA")
    return obj


def _load_artin(arg: str):
    from .artin import ArtinCdga
    shortcuts = {"k[eps0]": lambda: dual_numbers(0), "k[eps1]": lambda: dual_numbers(1)}
    if arg in shortcuts:
        return shortcuts[arg]()
    if arg.startswith("t^"):
        return truncated_polynomial(int(arg[2:]))
    obj = tf.loads(_read(arg))
    if not isinstance(obj, ArtinCdga):
        raise ValidationError(f"{arg} does not describe an Artinian cdga")
    return obj


def _load_kind(path: str, cls, what: str):
    obj = tf.loads(_read(path))
    if not isinstance(obj, cls):
        raise ValidationError(f"{path} does not describe {what}")
    return obj


def _element(path: str, host, cls):
    coeffs = tf.loads(_read(path))
    if not isinstance(coeffs, dict):
        raise ValidationError(f"{path} does not describe an element")
    try:
        vec = host.element(coeffs)
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"element does not fit the host: {exc}") from exc
    return cls(host, vec)


def _vec(host, vec) -> dict:
    return {host.labels[k]: _q(c) for k, c in sorted(vec.items())}


def _fmt(host, vec) -> str:
    return host.format_vector(vec) if vec else "0"


# commands -------------------------------------------------------------------------

def cmd_validate(a) -> _Result:
    obj = tf.loads(_read(a.file))
    kind = tf.parse_document(_read(a.file)).kind
    if isinstance(obj, dict):
        return _Result({"kind": kind, "terms": len(obj)}, [f"valid {kind} with {len(obj)} terms"])
    if isinstance(obj, CochainComplex):
        obj.validate()
        return _Result({"kind": kind, "dims": obj.space.dims()},
                       [f"valid complex, dims {obj.space.dims()}"])
    if isinstance(obj, CdgaMap):
        cls = classify_surjection(obj)
        return _Result({"kind": kind, "classification": cls.kind},
                       [f"valid extension, classified as {cls.kind}"])
    name = getattr(obj, "name", None) or kind
    data = {"kind": kind, "name": name, "dim": obj.dim}
    lines = [f"valid {kind} {name} of dimension {obj.dim}"]
    if kind == "artin":
        data["nilpotency_index"] = obj.nilpotency_index
        lines.append(f"nilpotency index {obj.nilpotency_index}")
    return _Result(data, lines)


def _parse_range(text: str | None, L: DGLA):
    if not text:
        degs = L.cdeg or (0,)
        return range(min(degs) - 1, max(degs) + 2)
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValidationError("ranges look like a..b")
    return range(int(lo), int(hi) + 1)


def cmd_cohomology(a) -> _Result:
    L = _load_dgla(a.dgla)
    dims = {n: L.cohomology(n)[0] for n in _parse_range(a.range, L)}
    return _Result({"dgla": L.name, "cohomology": {str(n): d for n, d in dims.items()}},
                   [f"H^{n} = {d}" for n, d in dims.items()])


def cmd_mc_check(a) -> _Result:
    from .mcgauge import MCElement
    L, A = _load_dgla(a.dgla), _load_artin(a.artin)
    N = coefficient_extension(L, A, validate=False)
    w = _element(a.element, N, MCElement)
    res = w.residual()
    ok = not res
    return _Result({"mc": ok, "residual": _vec(N, res)},
                   [f"element: {_fmt(N, w.coeffs)}", f"residual: {_fmt(N, res)}",
                    "Maurer-Cartan" if ok else "not Maurer-Cartan"],
                   EXIT_OK if ok else EXIT_INVALID)


def _tower_start(L: DGLA, N1, path: str | None):
    from .mcgauge import MCElement
    if path:
        return _element(path, N1, MCElement)
    z = L.cocycles(1)
    return MCElement(N1, N1.tensor(z[0], {0: Fraction(1)}) if z else {})


def cmd_mc_lift(a) -> _Result:
    from .artin import truncated_polynomial as tp
    from .mcgauge import lift_across_small_extension
    L = _load_dgla(a.dgla)
    if not a.tower.startswith("t^"):
        raise ValidationError("--tower takes t^N")
    top = int(a.tower[2:])
    if top < 2:
        raise ValidationError("--tower needs N >= 2")
    N1 = coefficient_extension(L, tp(2), validate=False)
    w = _tower_start(L, N1, a.element)
    if not w.is_mc():
        raise ValidationError("starting element is not Maurer-Cartan")
    stages, lines = [], [f"order 1: {_fmt(N1, w.coeffs)}"]
    code = EXIT_OK
    for n in range(2, top):
        B, A = tp(n), tp(n + 1)
        e = CdgaMap(A, B, {lab: {lab: 1} for lab in B.labels})
        res = lift_across_small_extension(w, e, L)
        stage = {"from": f"t^{n}", "to": f"t^{n + 1}", "obstruction": res.obstruction.describe()}
        lines.append(f"stage t^{n + 1} -> t^{n}: obstruction {res.obstruction.describe()}")
        if res.obstructed:
            stage["lifted"] = False
            stages.append(stage)
            lines.append(f"stage dies: no lift to k[t]/t^{n + 1}")
            code = EXIT_OBSTRUCTED
            break
        w = res.lift
        stage["lifted"] = True
        stage["lift"] = _vec(w.host, w.coeffs)
        stages.append(stage)
        lines.append(f"order {n}: {_fmt(w.host, w.coeffs)}")
    return _Result({"dgla": L.name, "tower": a.tower, "stages": stages}, lines, code)


def cmd_obstruction(a) -> _Result:
    from .mcgauge import MCElement, lift_across_small_extension, obstruction_via_cone
    L = _load_dgla(a.dgla)
    e = _load_kind(a.extension, CdgaMap, "an extension")
    NB = coefficient_extension(L, e.target, validate=False)
    w = _element(a.element, NB, MCElement)
    data, lines = {}, []
    direct = cone_cls = None
    if a.route in ("direct", "both"):
        res = lift_across_small_extension(w, e, L)
        direct = res.obstruction
        data["direct"] = direct.describe()
        lines.append(f"direct route: {direct.describe()}")
        if res.lift is not None:
            data["lift"] = _vec(res.lift.host, res.lift.coeffs)
            lines.append(f"lift: {_fmt(res.lift.host, res.lift.coeffs)}")
    if a.route in ("cone", "both"):
        cone_cls = obstruction_via_cone(w, e, L)
        data["cone"] = cone_cls.describe()
        lines.append(f"cone route: {cone_cls.describe()}")
    if direct is not None and cone_cls is not None:
        agree = direct.same_class(cone_cls)
        data["routes_agree"] = agree
        lines.append("routes agree" if agree else "routes DISAGREE")
        if not agree:
            return _Result(data, lines, EXIT_INVALID)
    cls = direct or cone_cls
    data["vanishes"] = cls.is_zero()
    return _Result(data, lines, EXIT_OK if cls.is_zero() else EXIT_OBSTRUCTED)


def cmd_gauge_act(a) -> _Result:
    from .mcgauge import GaugeElement, MCElement, gauge_act
    L, A = _load_dgla(a.dgla), _load_artin(a.artin)
    N = coefficient_extension(L, A, validate=False)
    x = _element(a.gauge, N, GaugeElement)
    w = _element(a.element, N, MCElement)
    if not w.is_mc():
        raise ValidationError("element is not Maurer-Cartan")
    out = gauge_act(x, w)
    return _Result({"result": _vec(N, out.coeffs)}, [f"x * omega = {_fmt(N, out.coeffs)}"])


def cmd_one_simplex(a) -> _Result:
    from .mcgauge import GaugeElement, MCElement, gauge_act
    from .simplicial import gauge_one_simplex
    L, A = _load_dgla(a.dgla), _load_artin(a.artin)
    N = coefficient_extension(L, A, validate=False)
    x = _element(a.gauge, N, GaugeElement)
    w = _element(a.element, N, MCElement)
    if not w.is_mc():
        raise ValidationError("element is not Maurer-Cartan")
    cell = gauge_one_simplex(w, x)
    v0, v1 = cell.vertex(0), cell.vertex(1)
    ok = v0 == w and v1 == gauge_act(x, w) and cell.is_mc()
    return _Result({"cell": repr(cell), "vertex0": _vec(N, v0.coeffs), "vertex1": _vec(N, v1.coeffs),
                    "certified": ok},
                   [f"cell: {cell!r}", f"vertex 0: {_fmt(N, v0.coeffs)}",
                    f"vertex 1: {_fmt(N, v1.coeffs)}",
                    "certified; endpoints match" if ok else "endpoint check FAILED"],
                   EXIT_OK if ok else EXIT_INVALID)


def cmd_nerve_pi(a) -> _Result:
    from .simplicial import nerve_pi_square_zero
    L = _load_dgla(a.dgla)
    if a.complex:
        V = _load_kind(a.complex, CochainComplex, "a complex")
        src = a.complex
    else:
        V, src = dual_numbers(a.eps), f"k[eps_{a.eps}]"
    d = nerve_pi_square_zero(L, V, a.i)
    return _Result({"dgla": L.name, "coefficients": src, "i": a.i, "dim": d},
                   [f"pi_{a.i} = {d}"])


def cmd_bar(a) -> _Result:
    from .koszul import bar_truncation
    L = _load_dgla(a.dgla)
    bar = bar_truncation(L, a.order)
    text = tf.dump_artin(bar.algebra)
    return _Result({"dim": bar.algebra.dim, "document": text}, text.rstrip("\n").split("\n"))


def cmd_cobar(a) -> _Result:
    from .koszul import cobar_truncation
    A = _load_artin(a.artin)
    cob = cobar_truncation(A, a.order)
    text = tf.dump_dgla(cob.dgla)
    return _Result({"dim": cob.dgla.dim, "document": text}, text.rstrip("\n").split("\n"))


def cmd_adjunction_check(a) -> _Result:
    from .koszul import (bar_truncation, bar_map_to_mc, cobar_map_to_mc, cobar_truncation,
                         mc_to_bar_map, mc_to_cobar_map)
    from .mcgauge import MCElement
    L, A = _load_dgla(a.dgla), _load_artin(a.artin)
    N = coefficient_extension(L, A, validate=False)
    w = _element(a.element, N, MCElement)
    if not w.is_mc():
        raise ValidationError("element is not Maurer-Cartan")
    order = a.order or max(1, A.nilpotency_index - 1)
    cob, bar = cobar_truncation(A, order), bar_truncation(L, order)
    back_cobar = cobar_map_to_mc(mc_to_cobar_map(w, cob), N)
    back_bar = bar_map_to_mc(mc_to_bar_map(w, bar), bar, N)
    ok = back_cobar == w and back_bar == w
    return _Result({"order": order, "cobar_roundtrip": back_cobar == w, "bar_roundtrip": back_bar == w},
                   [f"truncation order {order}",
                    f"cobar roundtrip: {'ok' if back_cobar == w else 'FAILED'}",
                    f"bar roundtrip: {'ok' if back_bar == w else 'FAILED'}"],
                   EXIT_OK if ok else EXIT_INVALID)


def cmd_counit_check(a) -> _Result:
    from .koszul import counit_cone_weight_cohomology
    L = _load_dgla(a.dgla)
    data, lines, ok = {}, [], True
    for w in range(1, a.weight + 1):
        betti = counit_cone_weight_cohomology(L, w)
        data[str(w)] = {str(n): d for n, d in betti.items()}
        ok &= not betti
        lines.append(f"weight {w}: " + ("acyclic" if not betti else
                                        ", ".join(f"H^{n} = {d}" for n, d in sorted(betti.items()))))
    return _Result({"dgla": L.name, "weights": data, "acyclic": ok}, lines,
                   EXIT_OK if ok else EXIT_INVALID)


def cmd_denormalize(a) -> _Result:
    from .simplicial import BigradedArtin, denormalize
    B = _load_kind(a.file, BigradedArtin, "a bigraded Artinian algebra")
    D = denormalize(B)
    levels, lines = {}, []
    for n in range(a.levels + 1):
        lev = D.level(n)
        levels[str(n)] = lev.dim
        lines.append(f"level {n}: dimension {lev.dim}")
    ok = D.check_identities(max_level=min(a.levels, 3))
    lines.append("cosimplicial identities hold")
    data = {"levels": levels, "identities": ok}
    if a.show is not None:
        text = tf.dump_artin(D.level(a.show))
        data["document"] = text
        lines += text.rstrip("\n").split("\n")
    return _Result(data, lines)


def cmd_tot(a) -> _Result:
    from .simplicial import BigradedArtin, tot_bigraded_artin
    B = _load_kind(a.file, BigradedArtin, "a bigraded Artinian algebra")
    T = tot_bigraded_artin(B)
    text = tf.dump_artin(T)
    return _Result({"dim": T.dim, "document": text}, text.rstrip("\n").split("\n"))


def _functor(a, L):
    from .functors import FunctorUnderTest
    if a.kind == "mc":
        return FunctorUnderTest.maurer_cartan(L)
    if a.kind == "broken":
        return FunctorUnderTest.broken(L, a.broken_on)
    return FunctorUnderTest.deformations(L)


def cmd_tangent(a) -> _Result:
    from .functors import tangent_report
    L = _load_dgla(a.dgla)
    rep = tangent_report(_functor(a, L), degrees=range(0, a.max + 1))
    return _Result({"functor": rep.functor, "tangent": {str(n): d for n, d in rep.tangent.items()}},
                   rep.lines())


def cmd_battery(a) -> _Result:
    from .functors import manetti_battery, schlessinger_homotopy_battery, standard_battery
    L = _load_dgla(a.dgla)
    F = _functor(a, L)
    bat = standard_battery()
    bat.seed = a.seed
    reports = []
    if a.which in ("manetti", "both"):
        reports.append(("manetti", manetti_battery(F, bat, samples=a.samples)))
    if a.which in ("schlessinger", "both"):
        reports.append(("schlessinger", schlessinger_homotopy_battery(F, bat, samples=a.samples)))
    lines, data = [], {}
    for nm, r in reports:
        lines += [f"== {nm} =="] + r.lines()
        data[nm] = r.to_dict()
    return _Result(data, lines)


# parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcdeform", description=__doc__.split("\n")[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(func=fn)
        return s

    s = add("validate", cmd_validate, "parse and validate a structure file")
    s.add_argument("file")
    s = add("cohomology", cmd_cohomology, "cohomology dimensions of a DGLA")
    s.add_argument("dgla")
    s.add_argument("--range", help="degrees a..b")
    s = add("mc-check", cmd_mc_check, "Maurer-Cartan residual of an element")
    s.add_argument("dgla")
    s.add_argument("artin", help="file, t^N, k[eps0] or k[eps1]")
    s.add_argument("element")
    s = add("mc-lift", cmd_mc_lift, "order-by-order lifting along k[t]/t^(n+1) -> k[t]/t^n")
    s.add_argument("dgla")
    s.add_argument("--tower", required=True, help="t^N")
    s.add_argument("--element", help="starting element over k[t]/t^2")
    s = add("obstruction", cmd_obstruction, "obstruction class across a small extension")
    s.add_argument("dgla")
    s.add_argument("extension")
    s.add_argument("element")
    s.add_argument("--route", choices=("direct", "cone", "both"), default="both")
    s = add("gauge-act", cmd_gauge_act, "act by a gauge element")
    for x in ("dgla", "artin", "gauge", "element"):
        s.add_argument(x)
    s = add("one-simplex", cmd_one_simplex, "gauge path as a 1-simplex of the nerve")
    for x in ("dgla", "artin", "gauge", "element"):
        s.add_argument(x)
    s = add("nerve-pi", cmd_nerve_pi, "homotopy groups of the nerve, square-zero coefficients")
    s.add_argument("dgla")
    s.add_argument("--eps", type=int, default=0, help="use k[eps_n]")
    s.add_argument("--complex", help="use k (+) V for a complex file")
    s.add_argument("-i", type=int, default=0)
    s = add("bar", cmd_bar, "truncated bar construction of a DGLA")
    s.add_argument("dgla")
    s.add_argument("--order", type=int, default=2)
    s = add("cobar", cmd_cobar, "truncated cobar construction of an Artinian cdga")
    s.add_argument("artin")
    s.add_argument("--order", type=int, default=2)
    s = add("adjunction-check", cmd_adjunction_check, "bar and cobar roundtrips of an MC element")
    s.add_argument("dgla")
    s.add_argument("artin")
    s.add_argument("element")
    s.add_argument("--order", type=int)
    s = add("counit-check", cmd_counit_check, "counit acyclicity weight by weight")
    s.add_argument("dgla")
    s.add_argument("--weight", type=int, default=2)
    s = add("denormalize", cmd_denormalize, "cosimplicial denormalisation of a bigraded algebra")
    s.add_argument("file")
    s.add_argument("--levels", type=int, default=3)
    s.add_argument("--show", type=int, help="print this level")
    s = add("tot", cmd_tot, "total Artinian cdga of a bigraded algebra")
    s.add_argument("file")
    for name, fn, help_ in (("tangent", cmd_tangent, "tangent cohomology of MC or Def"),
                            ("battery", cmd_battery, "deformation functor condition batteries")):
        s = add(name, fn, help_)
        s.add_argument("dgla")
        s.add_argument("--kind", choices=("def", "mc", "broken"), default="def")
        s.add_argument("--broken-on", default="cone(e0->k)")
        if name == "tangent":
            s.add_argument("--max", type=int, default=4)
        else:
            s.add_argument("--which", choices=("manetti", "schlessinger", "both"), default="both")
            s.add_argument("--samples", type=int, default=3)
            s.add_argument("--seed", type=int, default=1729)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res = args.func(args)
    except ParseError as exc:
        res = _Result({"error": "parse", "message": str(exc), "line": exc.line,
                       "column": exc.column}, [f"parse error: {exc}"], EXIT_PARSE)
    except InsufficientTruncationError as exc:
        res = _Result({"error": "validation", "message": str(exc), "minimal": exc.minimal},
                      [f"error: {exc}"], EXIT_INVALID)
    except (ValidationError, DimensionError, HostMismatchError) as exc:
        res = _Result({"error": "validation", "message": str(exc)}, [f"error: {exc}"], EXIT_INVALID)
    except OSError as exc:
        res = _Result({"error": "io", "message": str(exc)}, [f"error: {exc}"], EXIT_INVALID)
    if args.json:
        res.data["exit_code"] = res.code
        print(json.dumps(res.data, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(res.lines))
    return res.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
