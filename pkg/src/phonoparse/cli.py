"""Command-line driver.

Three subcommands share one executable:

    phonoparse run COMMAND_FILE
    phonoparse parse WORD --grammar FILE [--lexicon FILE] [options]
    phonoparse generate SHAPE --grammar FILE [options]

A grammar file is an ordinary command stream (it typically contains the
load_* commands); --lexicon names a second stream, convenient for keeping
entries apart from rules.  Tracing flags mirror the trace commands:
--trace-lookup, and --trace-rule NAME[:a|s|as] where a traces unapplication
and s traces application (both when omitted).
"""

from __future__ import annotations

import argparse
import sys

from .grammar_io import CommandError, CommandInterpreter
from .sexpr import QuotedString, SexprError, Symbol


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phonoparse",
        description="parse or generate word forms with linearly ordered rules")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a command file")
    run.add_argument("file")
    run.add_argument("--format", choices=("text", "structured"), default="text")

    def add_common(p):
        p.add_argument("--grammar", required=True, help="command file with load_* forms")
        p.add_argument("--lexicon", help="additional command file, usually entries")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--max-undeletions", type=int, metavar="N",
                       help="cap on undeletion passes per deletion rule")

    par = sub.add_parser("parse", help="parse a surface word form")
    par.add_argument("word")
    add_common(par)
    par.add_argument("--trace-rule", action="append", default=[], metavar="NAME[:a|s|as]",
                     help="trace a rule's unapplication (a), application (s), or both")
    par.add_argument("--trace-lookup", action="store_true", help="trace lexical lookup")

    gen = sub.add_parser("generate", help="derive the surface form of a lexical shape")
    gen.add_argument("shape")
    add_common(gen)
    return parser


def _load(interp: CommandInterpreter, args) -> None:
    interp.run_file(args.grammar)
    if args.lexicon:
        interp.run_file(args.lexicon)
    if args.max_undeletions:
        interp.max_undeletions = args.max_undeletions
    interp.output_format = args.format


def _apply_trace_flags(interp: CommandInterpreter, args) -> None:
    interp.trace_config.lexical_lookup = bool(args.trace_lookup)
    for item in args.trace_rule:
        name, _, flags = item.partition(":")
        flags = flags or "as"
        if not set(flags) <= {"a", "s"}:
            raise CommandError(f"bad trace flags {flags!r} for rule {name!r}")
        interp.trace_config.set_rule(name, "a" in flags, "s" in flags)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    out = sys.stdout
    interp = CommandInterpreter(out=out)
    try:
        if args.command == "run":
            interp.output_format = args.format
            interp.run_file(args.file)
        elif args.command == "parse":
            _load(interp, args)
            _apply_trace_flags(interp, args)
            interp.execute([Symbol("morph_and_lookup_word"), QuotedString(args.word)])
        else:
            _load(interp, args)
            if args.format == "structured":
                interp.execute([Symbol("generate_word"), QuotedString(args.shape)])
            else:
                from .lexicon import LexicalEntry
                from .pipeline import synthesize
                entry = LexicalEntry.from_shape(args.shape, "", interp.lexical_alphabet)
                print(synthesize(entry, interp.grammar()), file=out)
    except (CommandError, SexprError, ValueError, OSError) as error:
        print(f"phonoparse: {error}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
