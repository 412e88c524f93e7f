"""Command-line front end: ``critval <subcommand> ...``."""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from . import threshold
from .core_games import (
    BooleanGame,
    CompleteGameForm,
    GameFileError,
    WeightedRepresentation,
    enumerate_complete_forms,
    enumerate_simple_games,
    expand_complete_form,
    format_coalition,
    format_game,
    mask_of,
    parse_game,
    parse_rational,
)
from .exact_lp import export_lp_text, format_fraction
from .extremal_ilp import PROVED, Budget, build_max_mu_model, max_critical_threshold
from .spectrum import EXACT, spectrum as compute_spectrum

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Report:
    """Collects key/value lines and renders them in either output format."""

    def __init__(self, fmt: str, approx: bool):
        self.fmt = fmt
        self.approx = approx
        self.lines = []

    def add(self, key: str, value) -> None:
        if isinstance(value, Fraction):
            text = format_fraction(value)
            if self.approx:
                text += f"  (~{float(value):.6f})"
        else:
            text = str(value)
        sep = "=" if self.fmt == "keyvalue" else " = "
        self.lines.append(f"{key}{sep}{text}")

    def block(self, key: str, text: str) -> None:
        """Multi-line payload such as a game file."""
        if self.fmt == "keyvalue":
            for i, line in enumerate(text.rstrip("\n").splitlines(), start=1):
                self.lines.append(f"{key}.{i}={line}")
        else:
            self.lines.append(f"{key}:")
            self.lines.extend("  " + line for line in text.rstrip("\n").splitlines())

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _read_game(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_game(text)
    except GameFileError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _key_text(key) -> str:
    if isinstance(key, tuple):
        return "(" + " ".join(map(str, key)) + ")"
    return format_coalition(key)


def _weights_text(ws) -> str:
    return " ".join(format_fraction(w) for w in ws)


def _report_certificate(rep: Report, cert) -> None:
    rep.add("certificate_bound", cert.bound)
    for key in sorted(cert.u, key=_sort_key):
        rep.add(f"u {_key_text(key)}", cert.u[key])
    for key in sorted(cert.v, key=_sort_key):
        rep.add(f"v {_key_text(key)}", cert.v[key])


def _sort_key(key):
    return (0, key) if isinstance(key, int) else (1, tuple(-x for x in key))


def _threshold_of(game):
    if isinstance(game, CompleteGameForm):
        return "complete", threshold.mu_complete(game)
    if isinstance(game, BooleanGame):
        return "boolean", threshold.mu_boolean(game)
    if isinstance(game, WeightedRepresentation):
        return "weighted", threshold.mu_simple(game.game())
    return "simple", threshold.mu_simple(game)


def cmd_mu(args, rep: Report) -> int:
    game = _read_game(args.file)
    kind, res = _threshold_of(game)
    if args.game_class and args.game_class != kind and not (args.game_class == "simple" and kind == "weighted"):
        raise UsageError(f"file holds a {kind} game but --class {args.game_class} was given")
    rep.add("class", kind)
    rep.add("mu", res.mu)
    rep.add("z_star", res.raw_optimum)
    rep.add("weights", _weights_text(res.weights))
    if res.class_weights is not None:
        rep.add("class_weights", _weights_text(res.class_weights))
    _report_certificate(rep, res.dual_certificate)
    return EXIT_OK


def _cert_text(cert) -> str:
    lines = []
    for key in sorted(cert.u, key=_sort_key):
        lines.append(f"u {_key_text(key)} {format_fraction(cert.u[key])}")
    for key in sorted(cert.v, key=_sort_key):
        lines.append(f"v {_key_text(key)} {format_fraction(cert.v[key])}")
    return "\n".join(lines) + "\n"


def cmd_cert(args, rep: Report) -> int:
    game = _read_game(args.file)
    _, res = _threshold_of(game)
    text = _cert_text(res.dual_certificate)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.add("bound", res.dual_certificate.bound)
        rep.add("written", args.output)
    else:
        sys.stdout.write(text)
        rep.lines = []
    return EXIT_OK


_CERT_LINE = re.compile(r"^([uv])\s+(\{[^}]*\}|\([^)]*\))\s+(\S+)$")


def parse_certificate(text: str, game):
    u, v = {}, {}
    ordered = isinstance(game, CompleteGameForm)
    n = game.t if ordered else game.n
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _CERT_LINE.match(line)
        if not m:
            raise UsageError(f"certificate line {no}: expected 'u {{..}} P/Q' or 'v {{..}} P/Q'")
        side, group, value = m.groups()
        try:
            items = [int(x) for x in group[1:-1].replace(",", " ").split()]
            q = parse_rational(value)
        except ValueError as exc:
            raise UsageError(f"certificate line {no}: {exc}") from None
        if ordered:
            if group[0] != "(" or len(items) != n:
                raise UsageError(f"certificate line {no}: expected a class vector with {n} entries")
            key = tuple(items)
        else:
            if group[0] != "{" or any(not 1 <= i <= n for i in items):
                raise UsageError(f"certificate line {no}: expected a coalition over voters 1..{n}")
            key = mask_of(items)
        target = u if side == "u" else v
        target[key] = target.get(key, Fraction(0)) + q
    mode = threshold.ORDERED if ordered else (
        threshold.SIGNED if isinstance(game, BooleanGame) else threshold.NONNEGATIVE)
    bound = sum(u.values(), Fraction(0))
    return threshold.DualCertificate(u, v, bound, mode, game.class_sizes if ordered else None)


def cmd_verify(args, rep: Report) -> int:
    game = _read_game(args.file)
    if isinstance(game, WeightedRepresentation):
        game = game.game()
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.certificate}: {exc.strerror}") from None
    cert = parse_certificate(text, game)
    ok = threshold.verify_certificate(game, cert)
    rep.add("valid", "yes" if ok else "no")
    rep.add("bound", cert.bound)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cos(args, rep: Report) -> int:
    game = _read_game(args.file)
    if isinstance(game, CompleteGameForm):
        game = expand_complete_form(game)
    try:
        res = threshold.cost_of_stability(game)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.add("delta", res.delta)
    rep.add("payments", _weights_text(res.payments))
    return EXIT_OK


def _budget(args) -> Budget:
    nodes = args.nodes if args.nodes is not None else Budget().nodes
    secs = args.time_limit if args.time_limit is not None else Budget().seconds
    if nodes < 1 or secs <= 0:
        raise UsageError("budgets must be positive")
    return Budget(nodes, secs)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "--class" if name == "game_class" else "--" + name.replace("_", "-")
            raise UsageError(f"{flag} is required")


def cmd_extremal(args, rep: Report) -> int:
    _need(args, "game_class", "n")
    try:
        res = max_critical_threshold(args.game_class, args.n, args.proper, args.strong, args.r,
                                     _budget(args), allow_large=args.allow_large)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.add("class", args.game_class)
    rep.add("n", args.n)
    rep.add("status", "optimal" if res.status == PROVED else "bounds")
    if res.status == PROVED:
        rep.add("c", res.optimum)
    else:
        rep.add("lower", res.lower)
        rep.add("upper", res.upper)
    rep.add("nodes", res.node_count)
    if res.witness is not None:
        rep.add("witness_mu", res.optimum)
        rep.block("witness", format_game(res.witness))
        if res.form is not None:
            rep.block("witness_form", format_game(res.form))
    return EXIT_OK


def cmd_spectrum(args, rep: Report) -> int:
    _need(args, "game_class", "n")
    if args.proper or args.strong or args.r is not None:
        raise UsageError("spectrum does not take --proper, --strong or --r")
    try:
        res = compute_spectrum(args.game_class, args.n, _budget(args), allow_large=args.allow_large)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.add("class", args.game_class)
    rep.add("n", args.n)
    rep.add("status", "exact" if res.completeness == EXACT else "bounds")
    rep.add("completeness", res.completeness)
    rep.add("count", len(res.values))
    if rep.fmt == "human":
        rep.lines.append("values:")
    for i, value in enumerate(res.values, start=1):
        if rep.fmt == "keyvalue":
            rep.add(f"value.{i}", value)
        else:
            text = format_fraction(value)
            if rep.approx:
                text += f"  (~{float(value):.6f})"
            rep.lines.append("  " + text)
    return EXIT_OK


def _boolean_games(n: int):
    if not 1 <= n <= 4:
        raise UsageError("Boolean enumeration supports 1 <= n <= 4")
    size = 1 << n
    for code in range(1 << (size - 1)):
        yield BooleanGame.from_bits(n, code << 1)


def cmd_enumerate(args, rep: Report) -> int:
    _need(args, "game_class", "n")
    try:
        if args.game_class == "simple":
            stream = enumerate_simple_games(args.n)
        elif args.game_class == "complete":
            stream = enumerate_complete_forms(args.n)
        else:
            stream = _boolean_games(args.n)
        first = True
        for game in stream:
            if not first:
                sys.stdout.write("\n")
            sys.stdout.write(format_game(game))
            first = False
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.lines = []
    return EXIT_OK


def cmd_export(args, rep: Report) -> int:
    if args.file:
        game = _read_game(args.file)
        text = export_lp_text(threshold.primal_model(game))
    else:
        _need(args, "game_class", "n")
        try:
            model = build_max_mu_model(args.game_class, args.n, args.proper, args.strong, args.r)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        text = export_lp_text(model.lp, model.binaries)
    sys.stdout.write(text)
    rep.lines = []
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--class", dest="game_class", choices=("boolean", "simple", "complete"))
    common.add_argument("--n", type=int)
    common.add_argument("--proper", action="store_true")
    common.add_argument("--strong", action="store_true")
    common.add_argument("--r", type=int)
    common.add_argument("--nodes", type=int)
    common.add_argument("--time-limit", dest="time_limit", type=float, metavar="SECONDS")
    common.add_argument("--format", dest="fmt", choices=("human", "keyvalue"), default="human")
    common.add_argument("--approx", action="store_true", help="annotate fractions with decimals")
    common.add_argument("--allow-large", dest="allow_large", action="store_true",
                        help="lift the default voter-count caps")

    parser = argparse.ArgumentParser(prog="critval", description="Critical threshold values of simple games.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("mu", parents=[common], help="threshold, weights and certificate of a game file")
    p.add_argument("file")
    p = sub.add_parser("cert", parents=[common], help="write the dual certificate of a game file")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p = sub.add_parser("verify", parents=[common], help="check a certificate against a game file")
    p.add_argument("file")
    p.add_argument("certificate")
    p = sub.add_parser("cos", parents=[common], help="cost of stability of a game file")
    p.add_argument("file")
    sub.add_parser("extremal", parents=[common], help="largest threshold in a class")
    sub.add_parser("spectrum", parents=[common], help="all thresholds attained in a class")
    sub.add_parser("enumerate", parents=[common], help="list the games of a class")
    p = sub.add_parser("export", parents=[common], help="LP text of a game file or a max-threshold model")
    p.add_argument("file", nargs="?")
    return parser


_COMMANDS = {
    "mu": cmd_mu, "cert": cmd_cert, "verify": cmd_verify, "cos": cmd_cos,
    "extremal": cmd_extremal, "spectrum": cmd_spectrum, "enumerate": cmd_enumerate, "export": cmd_export,
}

_FLAG_SCHEMA = {
    "mu": {"game_class"}, "cert": set(), "verify": set(), "cos": set(),
    "extremal": {"game_class", "n", "proper", "strong", "r", "nodes", "time_limit", "allow_large"},
    "spectrum": {"game_class", "n", "nodes", "time_limit", "allow_large"},
    "enumerate": {"game_class", "n"},
    "export": {"game_class", "n", "proper", "strong", "r"},
}


def _validate_flags(args) -> None:
    allowed = _FLAG_SCHEMA[args.command]
    for name in ("game_class", "n", "proper", "strong", "r", "nodes", "time_limit", "allow_large"):
        val = getattr(args, name)
        if val not in (None, False) and name not in allowed:
            flag = "--class" if name == "game_class" else "--" + name.replace("_", "-")
            raise UsageError(f"{flag} is not accepted by '{args.command}'")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.fmt, args.approx)
    try:
        _validate_flags(args)
        code = _COMMANDS[args.command](args, rep)
    except UsageError as exc:
        print(f"critval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(rep.render() if rep.lines else "")
    return code


if __name__ == "__main__":
    sys.exit(main())
