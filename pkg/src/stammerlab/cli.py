"""Batch front-end: parse source specs, run one analysis, print a report.

Exit codes: 0 success, 2 for clean analytic negatives (NoRepeat from the
pigeonhole step, NotApplicable from the witness construction), 1 for
errors.  Output is deterministic for a fixed config and version.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from . import approximants, automata, complexity, expansions, morphisms, stammer
from .automata import AutomatonParseError, KAutomaton
from .complexity import ComplexityProfile, WindowTooShort
from .expansions import (AlgebraicIntegerSpec, AmbiguousFloor, QuadraticField,
                         UndecidedPrecision)
from .morphisms import FiniteImage, Morphism, MorphismParseError, NotProlongable
from .stammer import (ExtractionBug, NoRepeat, NotApplicable, StammerWitness,
                      WitnessSequence)
from .words import Alphabet, InvalidExponent, InvalidWord, SequenceSource, Word

COMMANDS = ("gen", "complexity", "stammer", "witness", "approx", "audit",
            "classify", "report")


@dataclass(frozen=True)
class JobConfig:
    command: str
    format: str = "tsv"
    seed: Optional[int] = None
    precision_bits: int = 128
    scan_limit: Optional[int] = None
    source: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError("unknown command %r" % self.command)
        if self.format not in ("tsv", "json"):
            raise ValueError("unknown format %r" % self.format)
        if self.precision_bits < 8:
            raise ValueError("precision-bits must be >= 8")
        if self.scan_limit is not None and self.scan_limit < 2:
            raise ValueError("scan-limit must be >= 2")
        if len(self.source) > 1:
            raise ValueError("give exactly one source")
        if self.command != "classify" and not self.source:
            raise ValueError("command %r needs a source" % self.command)


# ---------------------------------------------------------------------------
# source construction


def _parse_beta(spec: str):
    if spec == "golden":
        return QuadraticField(1, 1)
    if spec.startswith("quad:"):
        p, q = (int(t) for t in spec[5:].split(","))
        return QuadraticField(p, q)
    if spec.startswith("poly:"):
        return AlgebraicIntegerSpec(tuple(int(t) for t in spec[5:].split(",")))
    value = Fraction(spec)
    if value.denominator == 1:
        return int(value)
    return value


def _beta_source(xi: Fraction, beta, max_bits: int) -> SequenceSource:
    if isinstance(beta, QuadraticField):
        fld = beta
        top = fld.beta().floor() + 1

        def factory():
            x = fld.element(xi)
            b = fld.beta()
            while True:
                y = b * x
                d = y.floor()
                yield str(d)
                x = y - d

        return SequenceSource(Alphabet.digits(top), factory,
                              name="beta(%s,quad:%d,%d)" % (xi, fld.p, fld.q))
    if isinstance(beta, AlgebraicIntegerSpec):
        bound = 2 + max(abs(c) for c in beta.coeffs)

        def factory():
            count, pos = 64, 0
            while True:
                digs = expansions.beta_expansion(xi, beta, count,
                                                 max_precision_bits=max_bits)
                for d in digs[pos:]:
                    yield str(d)
                pos = count
                count *= 2

        return SequenceSource(Alphabet.digits(bound), factory,
                              name="beta(%s,poly:%s)" % (xi, beta))

    bq = Fraction(beta)
    top = math.ceil(bq) if bq.denominator > 1 else int(bq)

    def factory():
        x = xi
        while True:
            y = bq * x
            d = math.floor(y)
            yield str(d)
            x = y - d

    return SequenceSource(Alphabet.digits(top), factory,
                          name="beta(%s,b=%s)" % (xi, bq))


def _hensel_tail_source(exp: expansions.HenselExpansion) -> SequenceSource:
    return SequenceSource.from_function(
        Alphabet.digits(exp.p),
        lambda i: str(exp.digit_at_exponent(i)),
        name="hensel-tail(%s,p=%d)" % (exp.value, exp.p))


def _parse_lacunary(spec: str):
    if spec in ("", "none"):
        return ()
    if spec == "squares":
        return expansions.squares
    if spec.startswith("powers:"):
        return expansions.powers(int(spec[7:]))
    return tuple(int(t) for t in spec.split(","))


def _pick_start(phi: Morphism, override: Optional[str]) -> str:
    if override is not None:
        return override
    if phi.start is not None:
        return phi.start
    for letter in phi.source:
        if morphisms.is_prolongable(phi, letter):
            return letter
    raise NotProlongable("no prolongable start letter in %s"
                         % ",".join(phi.source))


def _load_source(cfg: JobConfig) -> tuple[SequenceSource, dict]:
    """Build the digit/symbol source; ctx carries parsed structure and base."""
    (kind, value), = cfg.source.items()
    p = cfg.params
    ctx: dict = {"kind": kind, "base": p.get("base")}
    if kind == "automaton":
        A = KAutomaton.parse_file(value)
        ctx["automaton"] = A
        return automata.generate(A, align=p.get("align", 1)), ctx
    if kind == "morphism":
        phi = Morphism.parse_file(value)
        start = _pick_start(phi, p.get("start"))
        ctx["morphism"] = phi
        ctx["start"] = start
        return morphisms.fixed_point(phi, start), ctx
    if kind == "b_adic":
        b = p.get("base")
        if b is None:
            raise ValueError("--b-adic needs --base")
        ctx["base"] = b
        return expansions.b_adic_digits(Fraction(value), b), ctx
    if kind == "beta":
        xi = Fraction(value)
        beta = _parse_beta(p.get("beta") or "golden")
        ctx["beta"] = beta
        if isinstance(beta, int):
            ctx["base"] = beta
        return _beta_source(xi, beta, cfg.precision_bits), ctx
    if kind == "hensel":
        prime = p.get("prime")
        if prime is None:
            raise ValueError("--hensel needs --prime")
        exp = expansions.hensel_digits(Fraction(value), prime)
        ctx["hensel"] = exp
        ctx["prime"] = prime
        return _hensel_tail_source(exp), ctx
    if kind == "pattern":
        b = p.get("base") or 2
        ctx["base"] = b
        return expansions.pattern_count_digits(p.get("pattern_k", 2),
                                               value, b), ctx
    if kind == "lacunary":
        b = p.get("base") or 2
        ctx["base"] = b
        return expansions.lacunary_digits(_parse_lacunary(value), b), ctx
    raise ValueError("unknown source kind %r" % kind)


# ---------------------------------------------------------------------------
# rendering


def emit_plot_data(obj, verified=None) -> tuple[list[str], list[list]]:
    """Stable tabular form of a complexity profile or a witness collection.

    Columns: (n, p, stable) for profiles; (index, uLen, vLen, w_num, w_den,
    verified, ratio) for witnesses, ratio appended as the trailing exact
    |U|/|V| column.
    """
    if isinstance(obj, ComplexityProfile):
        header = ["n", "p", "stable"]
        rows = [[n, c, int(st)] for n, c, st in obj.rows()]
        return header, rows
    if isinstance(obj, WitnessSequence):
        obj = list(obj)
    if isinstance(obj, (list, tuple)):
        header = ["index", "uLen", "vLen", "w_num", "w_den", "verified",
                  "ratio"]
        rows = []
        for idx, ws in enumerate(obj, start=1):
            if not isinstance(ws, StammerWitness):
                raise TypeError("expected witnesses, got %r" % (ws,))
            flag = 1 if verified is None else int(bool(verified[idx - 1]))
            rows.append([idx, len(ws.u), len(ws.v), ws.w.numerator,
                         ws.w.denominator, flag, str(ws.ratio)])
        return header, rows
    raise TypeError("cannot tabulate %r" % (obj,))


def _render(cfg: JobConfig, header: list[str], rows: list[list],
            out) -> None:
    if cfg.format == "json":
        payload = [dict(zip(header, row)) for row in rows]
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    out.write("\t".join(header) + "\n")
    for row in rows:
        out.write("\t".join(str(c) for c in row) + "\n")


def _render_object(cfg: JobConfig, record: dict, out) -> None:
    if cfg.format == "json":
        out.write(json.dumps(record, indent=2) + "\n")
        return
    keys = list(record)
    out.write("\t".join(keys) + "\n")
    out.write("\t".join(str(record[k]) for k in keys) + "\n")


# ---------------------------------------------------------------------------
# commands


def _cmd_gen(cfg: JobConfig, out) -> int:
    source, _ = _load_source(cfg)
    count = cfg.params["count"]
    if count < 0:
        raise ValueError("--count must be >= 0")
    out.write(source.prefix(count).text() + "\n")
    return 0


def _cmd_complexity(cfg: JobConfig, out) -> int:
    source, _ = _load_source(cfg)
    nmax = cfg.params["nmax"]
    window = cfg.params.get("window") or cfg.scan_limit
    profile = complexity.complexity_profile(source, nmax, window)
    _render(cfg, *emit_plot_data(profile), out)
    return 0


def _cmd_stammer(cfg: JobConfig, out) -> int:
    source, _ = _load_source(cfg)
    n = cfg.params["n"]
    kappa = cfg.params.get("kappa", 2)
    witness, trace = stammer.extract_witness(source, n, kappa)
    header = ["n", "kappa", "case", "i", "j", "uLen", "vLen", "w_num",
              "w_den", "verified", "ratio"]
    row = [trace.n, trace.kappa, trace.case, trace.i, trace.j,
           len(witness.u), len(witness.v), witness.w.numerator,
           witness.w.denominator, 1, str(witness.ratio)]
    _render(cfg, header, [row], out)
    return 0


def _construct_witnesses(cfg: JobConfig, ctx: dict,
                         source: SequenceSource
                         ) -> Union[WitnessSequence, NotApplicable]:
    p = cfg.params
    depth = p.get("depth", 8)
    scan = cfg.scan_limit or 10 ** 4
    if not p.get("hunt"):
        if ctx["kind"] == "automaton":
            sigma, coding = automata.to_uniform_morphism(ctx["automaton"])
            return stammer.witnesses_for_automatic(sigma, coding, depth)
        if ctx["kind"] == "morphism":
            return stammer.witnesses_for_morphic(ctx["morphism"], ctx["start"],
                                                 depth, scan_limit=scan)
    return stammer.witness_hunt(source,
                                Fraction(p.get("w_min", "3/2")),
                                Fraction(p.get("ratio_cap", "4")),
                                min(scan, p.get("hunt_window", 512)))


def _cmd_witness(cfg: JobConfig, out) -> int:
    source, ctx = _load_source(cfg)
    result = _construct_witnesses(cfg, ctx, source)
    if isinstance(result, NotApplicable):
        out.write("NotApplicable: %s\n" % result.reason)
        return 2
    _render(cfg, *emit_plot_data(result), out)
    return 0


def _cmd_approx(cfg: JobConfig, out) -> int:
    source, ctx = _load_source(cfg)
    r, s = cfg.params["r"], cfg.params["s"]
    toks = [int(t) for t in source.prefix_symbols(r + s)]
    if ctx["kind"] == "hensel":
        ha = approximants.hensel_approximant(
            [int(t) for t in source.prefix_symbols(max(r + s, 4 * (r + s)))],
            r, s, ctx["prime"])
        record = {
            "r": r, "s": s, "p": ha.p, "numerator": ha.numerator,
            "valueNum": ha.value.numerator, "valueDen": ha.value.denominator,
            "digitsUsed": ha.digits_used, "valuation": ha.valuation,
            "valuationIsLowerBound": ha.valuation_is_lower_bound,
            "firstDisagreement": ha.first_disagreement,
        }
        _render_object(cfg, record, out)
        return 0
    base = ctx.get("base")
    if base is None:
        raise ValueError("approx needs --base for this source")
    ap = approximants.periodic_approximant(toks, r, s)
    value = ap.value(base)
    record = {
        "r": r, "s": s, "base": base,
        "polynomial": ",".join(str(c) for c in ap.polynomial),
        "valueNum": value.numerator, "valueDen": value.denominator,
    }
    _render_object(cfg, record, out)
    return 0


def _cmd_audit(cfg: JobConfig, out) -> int:
    source, ctx = _load_source(cfg)
    base = ctx.get("base")
    if base is None:
        raise ValueError("audit needs a base-b digit source (set --base)")
    r, s = cfg.params["r"], cfg.params["s"]
    w = Fraction(cfg.params["w"]) if cfg.params.get("w") else None
    vec = approximants.approximant_vector(source, base, r, s)
    rep = approximants.subspace_audit(vec, source, base,
                                      precision_bits=cfg.precision_bits, w=w)
    record = rep.as_record()
    if cfg.format == "json":
        _render_object(cfg, record, out)
        return 0
    header = ["rPlusS", "r", "s", "digitsUsed", "exponentLo", "exponentHi",
              "belowMinus3"]
    row = [record["rPlusS"], record["r"], record["s"], record["digitsUsed"],
           record["exponent_enclosure"][0], record["exponent_enclosure"][1],
           int(record["exponentBelowMinus3"])]
    _render(cfg, header, [row], out)
    return 0


def _cmd_classify(cfg: JobConfig, out) -> int:
    coeffs = tuple(int(t) for t in cfg.params["poly"].split(","))
    spec = AlgebraicIntegerSpec(coeffs)
    result = expansions.classify_algebraic_integer(
        spec, max_precision_bits=max(cfg.precision_bits, 2 ** 16))
    record = {"polynomial": str(spec), "kind": result.kind,
              "detail": result.detail}
    _render_object(cfg, record, out)
    return 0


def _witness_tsv_rows(records: list[dict]) -> tuple[list[str], list[list]]:
    header = ["index", "uLen", "vLen", "w_num", "w_den", "verified", "ratio"]
    rows = []
    for rec in records:
        ratio = Fraction(rec["ratio"]["num"], rec["ratio"]["den"])
        rows.append([rec["index"], rec["uLen"], rec["vLen"], rec["w"]["num"],
                     rec["w"]["den"], int(rec.get("verified", False)),
                     str(ratio)])
    return header, rows


def _audit_tsv_rows(records: list[dict]) -> tuple[list[str], list[list]]:
    header = ["index", "rPlusS", "digitsUsed", "exponentLo", "exponentHi",
              "belowMinus3"]
    rows = []
    for rec in records:
        if "rPlusS" not in rec:
            continue
        rows.append([rec["index"], rec["rPlusS"], rec["digitsUsed"],
                     rec["exponent_enclosure"][0],
                     rec["exponent_enclosure"][1],
                     int(rec["exponentBelowMinus3"])])
    return header, rows


def _cmd_report(cfg: JobConfig, out) -> int:
    from . import _plotting
    source, ctx = _load_source(cfg)
    outdir = Path(cfg.params["outdir"])
    outdir.mkdir(parents=True, exist_ok=True)
    scan = cfg.scan_limit or 4096
    nmax = cfg.params.get("nmax", 30)

    profile = complexity.complexity_profile(source, nmax)
    witnesses = _construct_witnesses(cfg, ctx, source)
    base = ctx.get("base")
    report = approximants.criterion_report(source, base, witnesses,
                                           scan_limit=scan,
                                           precision_bits=cfg.precision_bits)
    report["config"] = {
        "source": cfg.source,
        "params": {k: v for k, v in sorted(cfg.params.items())
                   if k != "outdir"},
        "seed": cfg.seed,
        "precisionBits": cfg.precision_bits,
        "scanLimit": scan,
    }

    prof_header, prof_rows = emit_plot_data(profile)
    wit_header, wit_rows = _witness_tsv_rows(report["witnesses"])
    aud_header, aud_rows = _audit_tsv_rows(report["audit"])

    artifacts = {}
    artifacts["report.json"] = json.dumps(report, indent=2) + "\n"

    def tsv(header, rows):
        lines = ["\t".join(header)]
        lines += ["\t".join(str(c) for c in row) for row in rows]
        return "\n".join(lines) + "\n"

    artifacts["profile.tsv"] = tsv(prof_header, prof_rows)
    artifacts["witnesses.tsv"] = tsv(wit_header, wit_rows)
    artifacts["audit.tsv"] = tsv(aud_header, aud_rows)
    for name, text in artifacts.items():
        (outdir / name).write_text(text)

    _plotting.complexity_figure(prof_rows, outdir / "complexity.png",
                                source.name)
    _plotting.witness_figure(wit_rows, outdir / "witnesses.png", source.name)
    _plotting.audit_figure(aud_rows, outdir / "audit.png", source.name)

    for name in sorted(list(artifacts) + ["complexity.png", "witnesses.png",
                                          "audit.png"]):
        out.write("wrote %s\n" % (outdir / name))
    return 0


_DISPATCH = {
    "gen": _cmd_gen,
    "complexity": _cmd_complexity,
    "stammer": _cmd_stammer,
    "witness": _cmd_witness,
    "approx": _cmd_approx,
    "audit": _cmd_audit,
    "classify": _cmd_classify,
    "report": _cmd_report,
}


def run_job(cfg: JobConfig, out=None) -> int:
    """Run one job; returns the process exit code (0 ok, 2 analytic negative)."""
    out = out if out is not None else sys.stdout
    try:
        return _DISPATCH[cfg.command](cfg, out)
    except (AutomatonParseError, MorphismParseError) as exc:
        # str(exc) already carries file and line when known
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except NoRepeat as exc:
        out.write("NoRepeat: %s\n" % exc)
        return 2
    except (InvalidWord, InvalidExponent, NotProlongable, FiniteImage,
            WindowTooShort, ExtractionBug, AmbiguousFloor,
            UndecidedPrecision, approximants.InsufficientDigits,
            approximants.NeedMoreDigits, ValueError, OSError) as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


# ---------------------------------------------------------------------------
# argument parsing


def _source_parent() -> argparse.ArgumentParser:
    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--automaton", metavar="FILE",
                     help="k-automaton description file")
    src.add_argument("--morphism", metavar="FILE",
                     help="morphism description file (fixed point source)")
    src.add_argument("--start", metavar="LETTER",
                     help="fixed-point start letter override")
    src.add_argument("--b-adic", dest="b_adic", metavar="XI",
                     help="rational in (0,1), e.g. 1/3 (needs --base)")
    src.add_argument("--beta-xi", metavar="XI",
                     help="rational seed for a greedy beta-expansion")
    src.add_argument("--beta", metavar="SPEC",
                     help="golden | quad:P,Q | poly:C0,C1,.. | number")
    src.add_argument("--hensel", metavar="ALPHA",
                     help="rational for a p-adic digit tail (needs --prime)")
    src.add_argument("--prime", type=int, metavar="P")
    src.add_argument("--pattern", metavar="WORD",
                     help="digit block to count occurrences of")
    src.add_argument("--pattern-k", dest="pattern_k", type=int, default=2,
                     metavar="K", help="expansion base for --pattern")
    src.add_argument("--lacunary", metavar="SPEC",
                     help="powers:K | squares | comma list | none")
    src.add_argument("--base", type=int, metavar="B",
                     help="digit base (b-adic source, counting modulus, "
                          "approximant/audit base)")
    src.add_argument("--align", type=int, choices=(0, 1), default=1,
                     help="automaton indexing: symbol i is the machine value "
                          "at i-1 (align 1, default) or at i (align 0)")
    return src


def _witness_parent() -> argparse.ArgumentParser:
    par = argparse.ArgumentParser(add_help=False)
    par.add_argument("--depth", type=int, default=8,
                     help="iteration depth for constructed witnesses")
    par.add_argument("--hunt", action="store_true",
                     help="force the brute-force witness search")
    par.add_argument("--w-min", dest="w_min", default="3/2", metavar="W",
                     help="minimal exponent for hunted witnesses")
    par.add_argument("--ratio-cap", dest="ratio_cap", default="4",
                     metavar="R", help="cap on |U|/|V| for hunted witnesses")
    par.add_argument("--hunt-window", dest="hunt_window", type=int,
                     default=512, help="prefix length for the hunt")
    return par


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stammerlab",
        description="exact generators and repetition analysis for digit "
                    "sequences",
        allow_abbrev=False)
    parser.add_argument("--format", choices=("tsv", "json"), default="tsv")
    parser.add_argument("--seed", type=int, default=None,
                        help="recorded in reports; no command draws "
                             "randomness")
    parser.add_argument("--precision-bits", dest="precision_bits", type=int,
                        default=128)
    parser.add_argument("--scan-limit", dest="scan_limit", type=int,
                        default=None)
    sub = parser.add_subparsers(dest="command", required=True)
    src = _source_parent()
    wit = _witness_parent()

    gen = sub.add_parser("gen", parents=[src], help="print a symbol prefix")
    gen.add_argument("--count", type=int, required=True)

    comp = sub.add_parser("complexity", parents=[src],
                          help="distinct-factor counts p(n)")
    comp.add_argument("--nmax", type=int, required=True)
    comp.add_argument("--window", type=int, default=None,
                      help="prefix length used for counting")

    stam = sub.add_parser("stammer", parents=[src],
                          help="pigeonhole repetition extraction at one n")
    stam.add_argument("--n", type=int, required=True)
    stam.add_argument("--kappa", type=int, default=2)

    sub.add_parser("witness", parents=[src, wit],
                   help="witness sequence by construction or search")

    appr = sub.add_parser("approx", parents=[src],
                          help="truncate-and-periodize approximant value")
    appr.add_argument("--r", type=int, required=True)
    appr.add_argument("--s", type=int, required=True)

    aud = sub.add_parser("audit", parents=[src],
                         help="height/product exponent for one (r, s)")
    aud.add_argument("--r", type=int, required=True)
    aud.add_argument("--s", type=int, required=True)
    aud.add_argument("--w", default=None,
                     help="witness exponent guiding the digit budget")

    cls = sub.add_parser("classify",
                         help="Pisot/Salem/Neither for a monic polynomial")
    cls.add_argument("--poly", required=True, metavar="C0,C1,..",
                     help="monic integer coefficients, descending")

    rep = sub.add_parser("report", parents=[src, wit],
                         help="full certificate with plots and TSV tables")
    rep.add_argument("--outdir", required=True)
    rep.add_argument("--nmax", type=int, default=30)
    return parser


_SOURCE_KEYS = ("automaton", "morphism", "b_adic", "beta_xi", "hensel",
                "pattern", "lacunary")

_PARAM_KEYS = ("start", "base", "beta", "prime", "pattern_k", "align",
               "count", "nmax", "window", "n", "kappa", "depth", "hunt",
               "w_min", "ratio_cap", "hunt_window", "r", "s", "w", "poly",
               "outdir")


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    source = {}
    for key in _SOURCE_KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            name = "beta" if key == "beta_xi" else key
            source[name] = value
    params = {k: getattr(ns, k) for k in _PARAM_KEYS
              if getattr(ns, k, None) is not None}
    return JobConfig(command=ns.command, format=ns.format, seed=ns.seed,
                     precision_bits=ns.precision_bits,
                     scan_limit=ns.scan_limit, source=source, params=params)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return run_job(cfg)


if __name__ == "__main__":
    sys.exit(main())
