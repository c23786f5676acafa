"""Single command-line entry point.

Every response is a JSON envelope on stdout carrying the package version,
the subcommand, a sha256 of the canonical request payload, and either the
result or an error message.  Exact values are serialized as strings or
{num, den} objects, never floats.  Exit codes: 0 ok, 2 input validation,
1 internal certificate violation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import CertificateError, InputError
from . import binary_forms, bounds, bundle_calc, elementary_polys, kempf_torus
from .field_tower import TowerElement, is_prime, parse_tower


def _canonical(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _payload_hash(payload) -> str:
    return hashlib.sha256(_canonical(payload).encode()).hexdigest()


def _envelope(subcommand: str, payload, status: str, body) -> dict:
    env = {
        "version": __version__,
        "subcommand": subcommand,
        "payload_sha256": _payload_hash(payload),
        "status": status,
    }
    if status == "ok":
        env["result"] = body
    else:
        env["error"] = body
    return env


def _fraction_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def _check_prime(p: int) -> int:
    if not is_prime(p):
        raise InputError(f"p must be prime, got {p}")
    return p


def _parse_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {where}: {exc}") from exc


# -- subcommand handlers -----------------------------------------------------


def _coeff_list(raw: str, p: int) -> list:
    """Parse --coeffs: comma-separated expressions (a_N..a_0) or a JSON array."""
    if raw.strip().startswith("["):
        items = _parse_json(raw, "--coeffs")
        if not isinstance(items, list):
            raise InputError("--coeffs JSON must be an array")
        texts = [str(x) for x in items]
    else:
        texts = [chunk.strip() for chunk in raw.split(",")]
    if len(texts) < 2:
        raise InputError("need at least two coefficients (degree >= 1)")
    els = [parse_tower(t, p) for t in texts]
    return list(reversed(els))  # a_N..a_0 on the wire, a_0..a_N internally


def run_binary_form(args) -> dict:
    p = _check_prime(args.p)
    coeffs = _coeff_list(args.coeffs, p)
    form = binary_forms.BinaryForm(p, coeffs)
    report = binary_forms.analyze(form)
    out = {
        "status": report.status,
        "T": report.dominant_mult,
        "nu": report.nu.to_json(),
        "dominant_root": report.dominant_root.to_json() if report.dominant_root else None,
        "field_exponent": report.field_exponent,
        "one_ps": report.one_ps.to_json() if report.one_ps else None,
        "parabolic": report.parabolic.to_json() if report.parabolic else None,
    }
    return out


def run_kempf(args) -> dict:
    weights = _parse_json(args.weights, "--weights")
    if not isinstance(weights, list) or not all(isinstance(w, list) for w in weights):
        raise InputError("--weights must be a JSON array of integer vectors")
    state = kempf_torus.State.of([tuple(int(x) for x in w) for w in weights], args.n)
    q, cert = kempf_torus.nearest_point_with_certificate(state)
    found = kempf_torus.torus_destabilizer(state)
    out = {
        "q": [str(x) for x in q],
        "certificate": cert.to_json(),
    }
    if found is None:
        out.update({"lambda": None, "m": None, "normsq": None, "parabolic": None})
    else:
        lam, m, normsq = found
        out.update(
            {
                "lambda": list(lam.exponents),
                "m": m,
                "normsq": normsq,
                "parabolic": kempf_torus.parabolic_of(lam).to_json(),
            }
        )
    return out


def _word_coeffs(raw: str, m: int) -> dict:
    pairs = _parse_json(raw, "--v")
    if not isinstance(pairs, list):
        raise InputError("--v must be a JSON array of [word, coefficient] pairs")
    v = {}
    for pair in pairs:
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], list)):
            raise InputError(f"bad word/coefficient pair {pair!r}")
        word = tuple(int(x) for x in pair[0])
        v[word] = v.get(word, 0) + int(pair[1])
    return v


def _wedge_coeffs(raw: str) -> dict:
    pairs = _parse_json(raw, "--v")
    v = {}
    for pair in pairs:
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], list)):
            raise InputError(f"bad wedge key/coefficient pair {pair!r}")
        key = tuple(tuple(int(x) for x in w) for w in pair[0])
        v[key] = v.get(key, 0) + int(pair[1])
    return v


def run_ep(args) -> dict:
    p = _check_prime(args.p) if args.p is not None else None
    if args.action == "tensor":
        v = _word_coeffs(args.v, args.m)
        ep = elementary_polys.theta_tensor(v, args.n, args.m, p)
        basis = [list(w) for w in ep.basis]
    else:
        if args.r is None:
            raise InputError("wedge needs --r")
        v = _wedge_coeffs(args.v)
        ep = elementary_polys.theta_wedge(v, args.n, args.m, args.r, p)
        basis = [[list(w) for w in key] for key in ep.basis]
    out = {
        "count": len(ep),
        "degrees": list(ep.degrees()),
        "basis": basis,
        "polys": [str(q) for q in ep.polys],
    }
    if args.eval_at:
        mat = _parse_json(args.eval_at, "--eval-at")
        values = elementary_polys.evaluate(ep, mat)
        vanishing, nonvanishing = elementary_polys.vanishing_pattern(ep, mat)
        out["values"] = [str(x) for x in values]
        out["vanishing"] = list(vanishing)
        out["nonvanishing"] = list(nonvanishing)
    return out


def run_bounds(args) -> dict:
    p = _check_prime(args.p)
    if args.rep == "tensor":
        if args.n is None or args.m is None:
            raise InputError("tensor bound needs --n and --m")
        return bounds.tensor_t(args.n, args.m, p).to_json()
    if args.rep == "wedge":
        if args.n is None or args.m is None:
            raise InputError("wedge bound needs --n and --m")
        return bounds.wedge_t(args.n, args.m, p).to_json()
    if args.rep == "jh":
        if args.n is None or args.d is None:
            raise InputError("jh bound needs --n and --d")
        return bounds.jh_t(args.n, args.d, p).to_json()
    if args.rep == "symmetric":
        if args.N is None:
            raise InputError("symmetric bound needs --N")
        t = bounds.sl2_symmetric_t(args.N, p)
        return {
            "rep": "symmetric",
            "N": args.N,
            "p": p,
            "digits": bounds.padic_digits(args.N, p),
            "t": t,
        }
    raise InputError(f"unknown rep {args.rep!r}")


def _degrees(raw: str) -> bundle_calc.SplittingType:
    try:
        degs = [int(x.strip()) for x in raw.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad degree list {raw!r}") from exc
    return bundle_calc.SplittingType.of(degs)


def run_bundle(args) -> dict:
    st = _degrees(args.degrees)
    op = args.op
    if op == "slope":
        return {"degrees": list(st.degrees), "slope": _fraction_json(st.slope())}
    if op == "hn":
        blocks = st.hn_filtration()
        return {
            "degrees": list(st.degrees),
            "blocks": [list(b) for b in blocks],
            "slopes": [_fraction_json(Fraction(sum(b), len(b))) for b in blocks],
            "semistable": st.is_semistable(),
        }
    if op == "instability":
        return {"degrees": list(st.degrees), "instability_degree": st.instability_degree()}
    if op == "frob":
        if args.p is None or args.t is None:
            raise InputError("frob needs --p and --t")
        out = st.frobenius_pullback(_check_prime(args.p), args.t)
        return {"degrees": list(st.degrees), "p": args.p, "t": args.t,
                "pullback": list(out.degrees)}
    if op == "tensor":
        if args.with_degrees is None:
            raise InputError("tensor needs --with")
        other = _degrees(args.with_degrees)
        return {"degrees": list(st.degrees), "with": list(other.degrees),
                "induced": list(st.tensor(other).degrees)}
    if op == "wedge":
        if args.r is None:
            raise InputError("wedge needs --r")
        return {"degrees": list(st.degrees), "r": args.r,
                "induced": list(st.wedge(args.r).degrees)}
    if op == "sym":
        if args.N is None:
            raise InputError("sym needs --N")
        return {"degrees": list(st.degrees), "N": args.N,
                "induced": list(st.sym(args.N).degrees)}
    raise InputError(f"unknown bundle op {op!r}")


_HANDLERS = {
    "binary-form": run_binary_form,
    "kempf": run_kempf,
    "ep": run_ep,
    "bounds": run_bounds,
    "bundle": run_bundle,
}


def _payload_of(args) -> dict:
    skip = {"func", "format", "subcommand"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _dispatch_line(obj: dict) -> dict:
    """Run one batch request given as a JSON object with a `subcommand` key."""
    if not isinstance(obj, dict) or "subcommand" not in obj:
        raise InputError("batch line must be an object with a 'subcommand' key")
    sub = obj["subcommand"]
    payload = {k: v for k, v in obj.items() if k != "subcommand"}
    if sub == "binary-form":
        ns = argparse.Namespace(p=int(payload["p"]), coeffs=_as_text(payload["coeffs"]))
        return _envelope(sub, payload, "ok", run_binary_form(ns))
    if sub == "kempf":
        ns = argparse.Namespace(
            n=int(payload["n"]), weights=_as_text(payload["weights"])
        )
        return _envelope(sub, payload, "ok", run_kempf(ns))
    if sub == "ep":
        ns = argparse.Namespace(
            action=payload.get("action", "tensor"),
            n=int(payload["n"]),
            m=int(payload["m"]),
            r=payload.get("r"),
            p=payload.get("p"),
            v=_as_text(payload["v"]),
            eval_at=_as_text(payload["eval_at"]) if "eval_at" in payload else None,
        )
        return _envelope(sub, payload, "ok", run_ep(ns))
    if sub == "bounds":
        ns = argparse.Namespace(
            rep=payload["rep"],
            n=payload.get("n"),
            m=payload.get("m"),
            d=payload.get("d"),
            N=payload.get("N"),
            p=int(payload["p"]),
        )
        return _envelope(sub, payload, "ok", run_bounds(ns))
    if sub == "bundle":
        ns = argparse.Namespace(
            degrees=_as_text(payload["degrees"]),
            op=payload["op"],
            p=payload.get("p"),
            t=payload.get("t"),
            r=payload.get("r"),
            N=payload.get("N"),
            with_degrees=_as_text(payload["with"]) if "with" in payload else None,
        )
        return _envelope(sub, payload, "ok", run_bundle(ns))
    raise InputError(f"unknown subcommand {sub!r} in batch line")


def _as_text(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value)


def _batch_worker(line: str):
    text = line.strip()
    if not text:
        return None
    try:
        obj = json.loads(text)
        return _dispatch_line(obj)
    except CertificateError as exc:
        return _envelope("batch-line", {"line": text}, "error", str(exc))
    except (InputError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        return _envelope("batch-line", {"line": text}, "error", str(exc))


def run_batch(args, stream=None) -> int:
    out = stream if stream is not None else sys.stdout
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    threads = int(os.environ.get("INSTABILITY_LAB_THREADS", "1") or "1")
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_batch_worker, lines))
    else:
        results = [_batch_worker(line) for line in lines]
    for res in results:
        if res is not None:
            print(json.dumps(res), file=out)
    return 0


# -- top level ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="instability-lab",
        description="Exact Hilbert-Mumford/Kempf instability toolkit over F_p(s).",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    bf = sub.add_parser("binary-form", help="SL(2) instability of a binary form")
    bf_sub = bf.add_subparsers(dest="action", required=True)
    bfa = bf_sub.add_parser("analyze")
    bfa.add_argument("--p", type=int, required=True)
    bfa.add_argument("--coeffs", required=True,
                     help="a_N..a_0, comma separated expressions or a JSON array")

    ke = sub.add_parser("kempf", help="torus destabilizer of a weight state")
    ke.add_argument("--n", type=int, required=True)
    ke.add_argument("--weights", required=True, help="JSON array of integer vectors")

    ep = sub.add_parser("ep", help="elementary polynomials")
    ep.add_argument("action", choices=("tensor", "wedge"))
    ep.add_argument("--n", type=int, required=True)
    ep.add_argument("--m", type=int, required=True)
    ep.add_argument("--r", type=int)
    ep.add_argument("--p", type=int)
    ep.add_argument("--v", required=True, help="JSON [word, coeff] pairs")
    ep.add_argument("--eval-at", dest="eval_at", help="JSON matrix to evaluate at")

    bo = sub.add_parser("bounds", help="bound formulas")
    bo.add_argument("--rep", choices=("tensor", "wedge", "jh", "symmetric"), required=True)
    bo.add_argument("--n", type=int)
    bo.add_argument("--m", type=int)
    bo.add_argument("--d", type=int)
    bo.add_argument("--N", type=int)
    bo.add_argument("--p", type=int, required=True)

    bu = sub.add_parser("bundle", help="split-bundle calculus on the projective line")
    bu.add_argument("--degrees", required=True, help="comma separated integers")
    bu.add_argument("--op", required=True,
                    choices=("slope", "hn", "instability", "frob", "tensor", "wedge", "sym"))
    bu.add_argument("--p", type=int)
    bu.add_argument("--t", type=int)
    bu.add_argument("--r", type=int)
    bu.add_argument("--N", type=int)
    bu.add_argument("--with", dest="with_degrees", help="second degree list for tensor")

    ba = sub.add_parser("batch", help="process a JSON-lines corpus")
    ba.add_argument("--file", required=True)

    re = sub.add_parser("report", help="render figures and a CSV summary for a corpus")
    re.add_argument("--file", required=True)
    re.add_argument("--out-dir", dest="out_dir", required=True)
    re.add_argument("--figure-format", dest="figure_format", default="png",
                    choices=("png", "svg", "pdf"))

    return parser


def _render_text(result: dict, indent: str = "") -> str:
    lines = []
    for key, val in result.items():
        if isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_render_text(val, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {val}")
    return "\n".join(lines)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "batch":
        try:
            return run_batch(args)
        except InputError as exc:
            print(json.dumps(_envelope("batch", {"file": args.file}, "error", str(exc))))
            return 2
    if args.subcommand == "report":
        from . import report

        try:
            summary = report.render_report(args.file, args.out_dir, args.figure_format)
        except InputError as exc:
            print(json.dumps(_envelope("report", {"file": args.file}, "error", str(exc))))
            return 2
        print(json.dumps(_envelope("report", {"file": args.file}, "ok", summary)))
        return 0

    handler = _HANDLERS[args.subcommand]
    payload = _payload_of(args)
    try:
        result = handler(args)
    except CertificateError as exc:
        print(json.dumps(_envelope(args.subcommand, payload, "error", str(exc))))
        return 1
    except (InputError, ValueError, ZeroDivisionError) as exc:
        print(json.dumps(_envelope(args.subcommand, payload, "error", str(exc))))
        return 2
    env = _envelope(args.subcommand, payload, "ok", result)
    if args.format == "text":
        print(_render_text(env))
    else:
        print(json.dumps(env))
    return 0


if __name__ == "__main__":
    sys.exit(main())
