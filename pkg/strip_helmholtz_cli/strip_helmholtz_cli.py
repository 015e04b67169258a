import sys
from argparse import ArgumentParser

from .run import run_command_parser


def main(argv=None):
    parser = ArgumentParser(
        "strip-helmholtz",
        usage="strip-helmholtz --mode {roots,solve,trace,field,verify} --config PATH [<args>]",
        description="Semi-analytic Helmholtz solver for a semi-infinite strip with membrane or plate walls.",
        allow_abbrev=False,
    )
    run_command_parser(parser)

    args = parser.parse_args(argv)

    if not hasattr(args, "entrypoint"):
        parser.print_help()
        sys.exit(1)

    sys.exit(args.entrypoint(args))


if __name__ == "__main__":
    main()
