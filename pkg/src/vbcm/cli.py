"""Command-line front end.

Usage: ``vbcm [--field q|fp:P] [--format json|csv|markdown] [--seed N] GROUP COMMAND ...``

JSON inputs are passed as a positional argument, or ``-`` to read stdin.
Global flags fall back to the environment variables ``BUNDLES_FIELD``,
``BUNDLES_FORMAT`` and ``BUNDLES_SEED``.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 a mathematical
precondition failed (for example a matrix that is not invertible).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import band, chain, cmmod, cohom, laurent, wild
from .errors import PreconditionError, ValidationError, VbcmError
from .field import QQ, parse_field

ENV_PREFIX = "BUNDLES_"
FORMATS = ("json", "csv", "markdown")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass(frozen=True)
class Config:
    field: object = QQ
    seed: int = 0
    output_format: str = "json"


@dataclass(frozen=True)
class CatalogRequest:
    target: str
    b: tuple
    rank_min: int
    rank_max: int

    def __post_init__(self):
        if self.target not in ("cusp", "elliptic", "qcusp"):
            raise ValidationError(f"unknown catalog target {self.target!r}")
        if self.rank_min < 1 or self.rank_max < self.rank_min:
            raise ValidationError("rank range must be non-empty with bounds >= 1")


# ---------------------------------------------------------------- input


def _load_json(text):
    if text == "-":
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON input: {exc}") from exc


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def _sequence_payload(data):
    if isinstance(data, dict):
        data = data.get("d")
    if not isinstance(data, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in data):
        raise ValidationError("expected a list of integers or an object with 'd'")
    return tuple(data)


# ---------------------------------------------------------------- output


def _cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _as_rows(obj):
    if isinstance(obj, list) and all(isinstance(x, dict) for x in obj):
        rows = obj
    elif isinstance(obj, dict):
        rows = [obj]
    else:
        rows = [{"value": obj}]
    cols = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    return cols, rows


def render(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj)
    cols, rows = _as_rows(obj)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_cell(row.get(c)) for c in cols])
        return buf.getvalue().rstrip("\n")
    lines = ["| " + " | ".join(cols) + " |", "|" + "|".join("---" for _ in cols) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(_cell(row.get(c)).replace("|", "\\|") for c in cols) + " |")
    return "\n".join(lines)


# ---------------------------------------------------------------- commands


def cmd_p1_split(args, cfg):
    A = laurent.LaurentMatrix.from_json(_load_json(args.payload), cfg.field)
    if args.transforms:
        res = laurent.diagonalize(A)
        return {"degrees": list(res.degrees), "S": res.S.to_json(), "T": res.T.to_json()}
    return list(laurent.splitting_type(A))


def cmd_p1_sections(args, cfg):
    A = laurent.LaurentMatrix.from_json(_load_json(args.payload), cfg.field)
    return laurent.section_dim_oracle(A, args.twist)


def cmd_chain_classify(args, cfg):
    data = chain.ChainData.from_json(_load_json(args.payload), cfg.field)
    _, bundles = chain.reduce_chain(data)
    return [list(b) for b in bundles]


def cmd_chain_tf(args, cfg):
    data = chain.ChainData.from_json(_load_json(args.payload), cfg.field)
    return [x.to_json() for x in chain.decompose_torsion_free(data)]


def _band(args, cfg, attr="payload"):
    return band.BandDatum.from_json(_load_json(getattr(args, attr)), cfg.field)


def cmd_band_canon(args, cfg):
    return band.canonical_form(_band(args, cfg)).to_json()


def cmd_band_iso(args, cfg):
    return band.are_isomorphic(_band(args, cfg), _band(args, cfg, "other"))


def cmd_band_enum(args, cfg):
    return [list(d) for d in band.enumerate_nonneg(args.s, args.r, _int_list(args.delta))]


def cmd_band_nu(args, cfg):
    return band.nu_count(args.s, args.r, _int_list(args.delta))


def cmd_band_glue(args, cfg):
    return band.build_gluing(_band(args, cfg)).to_json()


def cmd_band_cut(args, cfg):
    return band.cut_cycle(_band(args, cfg)).to_json()


def cmd_band_curve_type(args, cfg):
    return band.curve_vb_type(band.DualGraph.from_json(_load_json(args.payload))).value


def cmd_cohom_dims(args, cfg):
    return cohom.cohomology(_band(args, cfg)).to_json()


def cmd_cohom_suitable(args, cfg):
    return cohom.is_suitable(_sequence_payload(_load_json(args.payload)))


def cmd_cohom_spanned(args, cfg):
    return cohom.is_generically_spanned(_band(args, cfg))


def cmd_cohom_atiyah(args, cfg):
    return cohom.atiyah_cohom(args.r, args.d, args.n, args.at_origin).to_json()


def _cusp(b):
    b = _int_list(b)
    return cmmod.CuspSingularity(len(b), b)


def _elliptic(b):
    try:
        return cmmod.SimpleEllipticSingularity(int(b))
    except ValueError as exc:
        raise ValidationError(f"b must be an integer, got {b!r}") from exc


def _qcusp(b):
    b = _int_list(b)
    return cmmod.QCuspData(len(b), b)


def cmd_cm_cusp(args, cfg):
    return [x.to_json() for x in cmmod.enumerate_cm_cusp(_cusp(args.b), args.rank, args.sample_lambda, cfg.field)]


def cmd_cm_elliptic(args, cfg):
    return [x.to_json() for x in cmmod.enumerate_cm_elliptic(_elliptic(args.b), args.rank)]


def cmd_cm_qcusp(args, cfg):
    return [x.to_json() for x in cmmod.enumerate_cm_qcusp(_qcusp(args.b), args.max_rank, args.sample_lambda, cfg.field)]


def cmd_cm_nd(args, cfg):
    return cmmod.n_d(_int_list(args.d), _cusp(args.b))


def cmd_cm_sigma(args, cfg):
    f = cfg.field
    d, m, lam = cmmod.sigma_act(_int_list(args.d), args.m, f.parse(args.lam), args.t, f)
    return {"d": list(d), "m": m, "lambda": f.format(lam)}


def _module(text, cfg):
    return wild.ModulePresentation.from_json(_load_json(text), cfg.field)


def cmd_wild_embed(args, cfg):
    M = _module(args.payload, cfg)
    lambdas = None
    if args.lambdas is not None:
        lambdas = [cfg.field.parse(x) for x in args.lambdas.split(",")]
    return wild.embed_sigma2(M, lambdas).to_json()


def cmd_wild_homdim(args, cfg):
    M, N = _module(args.payload, cfg), _module(args.other, cfg)
    out = {"hom_dim": wild.hom_dim(M, N)}
    if args.embedded:
        out["hom_dim_sigma2"] = wild.hom_dim_sigma2(wild.embed_sigma2(M), wild.embed_sigma2(N))
    return out


def cmd_wild_witness(args, cfg):
    params = {}
    if args.payload is not None:
        data = _load_json(args.payload)
        if not isinstance(data, dict):
            raise ValidationError("witness parameters must be a JSON object")
        params.update(data)
    for name in ("z1", "z2", "z3", "z4", "z5", "alpha"):
        v = getattr(args, name)
        if v is not None:
            params[name] = cfg.field.parse(v)
    for name in ("z1", "z2", "z3", "z4", "z5", "alpha"):
        if isinstance(params.get(name), str):
            params[name] = cfg.field.parse(params[name])
    try:
        kind = wild.WitnessKind(args.kind.upper())
    except ValueError as exc:
        raise ValidationError(f"unknown witness kind {args.kind!r}") from exc
    return wild.witness(kind, params, cfg.field).to_json()


CATALOG_COLUMNS = ("rank", "variant", "label", "d", "m", "lambda_excluded", "lambda")


def catalog_rows(req: CatalogRequest, cfg: Config):
    rows = []
    if req.target == "qcusp":
        data = cmmod.QCuspData(len(req.b), req.b)
        found = cmmod.enumerate_cm_qcusp(data, req.rank_max, False, cfg.field)
        items = [x for x in found if req.rank_min <= x.rank]
    else:
        items = []
        for rank in range(req.rank_min, req.rank_max + 1):
            if req.target == "cusp":
                items += cmmod.enumerate_cm_cusp(cmmod.CuspSingularity(len(req.b), req.b), rank, False, cfg.field)
            else:
                if len(req.b) != 1:
                    raise ValidationError("an elliptic catalog needs a single b")
                items += cmmod.enumerate_cm_elliptic(cmmod.SimpleEllipticSingularity(req.b[0]), rank)
    for x in items:
        j = x.to_json()
        row = {c: j.get(c) for c in CATALOG_COLUMNS}
        for k, v in j.items():
            if k not in row:
                row[k] = v
        rows.append(row)
    return rows


def cmd_catalog(args, cfg):
    req = CatalogRequest(args.target, _int_list(args.b), args.rank_min, args.rank_max)
    rows = catalog_rows(req, cfg)
    if args.out:
        path = Path(args.out)
        path.write_text(render(rows, cfg.output_format) + "\n")
        return {"written": str(path), "rows": len(rows)}
    return rows


# ---------------------------------------------------------------- parser


def _payload(p, name="payload", help="JSON input, or - for stdin"):
    p.add_argument(name, help=help)


def build_parser() -> argparse.ArgumentParser:
    env = os.environ
    parser = _Parser(prog="vbcm", description="Vector bundles on degenerations of elliptic curves and CM modules.")
    parser.add_argument("--field", default=env.get(ENV_PREFIX + "FIELD", "q"), help="q or fp:<prime> (env BUNDLES_FIELD)")
    parser.add_argument(
        "--format", dest="output_format", metavar="FORMAT", default=env.get(ENV_PREFIX + "FORMAT", "json"), help="json, csv or markdown (env BUNDLES_FORMAT)"
    )
    parser.add_argument("--seed", default=env.get(ENV_PREFIX + "SEED", "0"), help="integer seed (env BUNDLES_SEED)")
    # the global flags are also accepted after the command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS)
    common.add_argument("--format", dest="output_format", metavar="FORMAT", default=argparse.SUPPRESS)
    common.add_argument("--seed", default=argparse.SUPPRESS)
    groups = parser.add_subparsers(dest="group", metavar="GROUP", parser_class=_Parser)
    groups.required = True

    def group(name, help):
        g = groups.add_parser(name, help=help)
        sub = g.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
        sub.required = True
        return sub

    p1 = group("p1", "vector bundles on the projective line")
    c = p1.add_parser("split", parents=[common], help="splitting type of a Laurent gluing matrix")
    _payload(c)
    c.add_argument("--transforms", action="store_true", help="also print S and T with S*A*T diagonal")
    c.set_defaults(func=cmd_p1_split)
    c = p1.add_parser("sections", parents=[common], help="h0 of the twisted bundle, by direct linear algebra")
    _payload(c)
    c.add_argument("--twist", type=int, default=0)
    c.set_defaults(func=cmd_p1_sections)

    ch = group("chain", "bundles on a chain of projective lines")
    c = ch.add_parser("classify", parents=[common], help="line bundle summands of a vector bundle")
    _payload(c)
    c.set_defaults(func=cmd_chain_classify)
    c = ch.add_parser("tf-classify", parents=[common], help="summands of a torsion-free sheaf")
    _payload(c)
    c.set_defaults(func=cmd_chain_tf)

    bd = group("band", "bundles on a cycle of projective lines")
    for name, func, help in (
        ("canon", cmd_band_canon, "canonical representative under s-shifts"),
        ("glue", cmd_band_glue, "node identification matrices"),
        ("cut", cmd_band_cut, "chain data obtained by cutting the cycle"),
        ("cohom", cmd_cohom_dims, "h0 and h1 (same as 'cohom dims')"),
    ):
        c = bd.add_parser(name, help=help, parents=[common])
        _payload(c)
        c.set_defaults(func=func)
    c = bd.add_parser("iso", parents=[common], help="whether two band data are isomorphic")
    _payload(c)
    _payload(c, "other", "second band datum")
    c.set_defaults(func=cmd_band_iso)
    for name, func, help in (
        ("enum", cmd_band_enum, "non-negative band sequences with given class sums"),
        ("nu", cmd_band_nu, "number of such sequences"),
    ):
        c = bd.add_parser(name, help=help, parents=[common])
        c.add_argument("--s", type=int, required=True)
        c.add_argument("--r", type=int, required=True)
        c.add_argument("--delta", required=True, help="comma-separated class sums")
        c.set_defaults(func=func)
    c = bd.add_parser("curve-type", parents=[common], help="vector bundle type of a curve from its dual graph")
    _payload(c)
    c.set_defaults(func=cmd_band_curve_type)

    co = group("cohom", "cohomology of band bundles")
    c = co.add_parser("dims", parents=[common], help="h0 and h1")
    _payload(c)
    c.set_defaults(func=cmd_cohom_dims)
    c = co.add_parser("suitable", parents=[common], help="whether a sequence is suitable")
    _payload(c)
    c.set_defaults(func=cmd_cohom_suitable)
    c = co.add_parser("spanned", parents=[common], help="whether the bundle is generically spanned")
    _payload(c)
    c.set_defaults(func=cmd_cohom_spanned)
    c = co.add_parser("atiyah", parents=[common], help="cohomology of an indecomposable bundle on an elliptic curve")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--at-origin", action="store_true")
    c.set_defaults(func=cmd_cohom_atiyah)

    cm = group("cm", "Cohen-Macaulay modules over surface singularities")
    c = cm.add_parser("cusp-enum", parents=[common], help="families over a cusp singularity of given rank")
    c.add_argument("--b", required=True, help="comma-separated b_i")
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--sample-lambda", action="store_true")
    c.set_defaults(func=cmd_cm_cusp)
    c = cm.add_parser("elliptic-enum", parents=[common], help="families over a simple elliptic singularity")
    c.add_argument("--b", required=True)
    c.add_argument("--rank", type=int, required=True)
    c.set_defaults(func=cmd_cm_elliptic)
    c = cm.add_parser("qcusp-enum", parents=[common], help="families over a Q-cusp, up to a cover rank")
    c.add_argument("--b", required=True, help="self-intersections on the cover")
    c.add_argument("--max-rank", type=int, required=True)
    c.add_argument("--sample-lambda", action="store_true")
    c.set_defaults(func=cmd_cm_qcusp)
    c = cm.add_parser("nd", parents=[common], help="the number n_d")
    c.add_argument("--b", required=True)
    c.add_argument("--d", required=True)
    c.set_defaults(func=cmd_cm_nd)
    c = cm.add_parser("sigma", parents=[common], help="action of the involution on band data")
    c.add_argument("--d", required=True)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--lambda", dest="lam", default="1")
    c.add_argument("--t", type=int, required=True)
    c.set_defaults(func=cmd_cm_sigma)

    wd = group("wild", "wildness gadgets")
    c = wd.add_parser("embed", parents=[common], help="pair of matrices for a module presentation")
    _payload(c)
    c.add_argument("--lambdas", help="comma-separated distinct scalars")
    c.set_defaults(func=cmd_wild_embed)
    c = wd.add_parser("homdim", parents=[common], help="dimension of the Hom space between two presentations")
    _payload(c)
    _payload(c, "other", "second module presentation")
    c.add_argument("--embedded", action="store_true", help="also compare after embedding")
    c.set_defaults(func=cmd_wild_homdim)
    c = wd.add_parser("witness", parents=[common], help="explicit witness matrices")
    c.add_argument("--kind", required=True, help="GENUS, STEP71, STEP72, STEP73 or STEP74")
    c.add_argument("payload", nargs="?", help="optional JSON object of parameters")
    for name in ("z1", "z2", "z3", "z4", "z5", "alpha"):
        c.add_argument(f"--{name}")
    c.set_defaults(func=cmd_wild_witness)

    c = groups.add_parser("catalog", parents=[common], help="rank-indexed table of CM module families")
    c.add_argument("--target", required=True, choices=("cusp", "elliptic", "qcusp"))
    c.add_argument("--b", required=True)
    c.add_argument("--rank-min", type=int, default=1)
    c.add_argument("--rank-max", type=int, required=True)
    c.add_argument("--out", help="write the table to this path instead of stdout")
    c.set_defaults(func=cmd_catalog)
    return parser


def _config(args) -> Config:
    field = parse_field(args.field)
    if args.output_format not in FORMATS:
        raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
    try:
        seed = int(args.seed)
    except ValueError as exc:
        raise UsageError(f"--seed must be an integer, got {args.seed!r}") from exc
    return Config(field, seed, args.output_format)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", cmmod.CuspAdvisoryWarning)
            result = args.func(args, cfg)
        for w in caught:
            print(f"warning: {w.message}", file=stderr)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return 1
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 3
    except (ValidationError, VbcmError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    print(render(result, cfg.output_format), file=stdout)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
