"""
Console entry point: ``basym <command> --input FILE [options]``
"""
import sys

from .conf import configure

COMMANDS = ("betti", "rees", "stanley", "shape", "verify", "gb", "bounds")


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(
            "usage: basym <command> --input FILE [--ell N] [--t a..b] [--wcap W] "
            "[--json PATH] [--tsv PATH] [--seed N] [--threads N]\n"
            f"commands: {', '.join(COMMANDS)}\n"
        )
        return 0
    if argv[0] not in COMMANDS:
        sys.stderr.write(f"basym: unknown command '{argv[0]}'\n")
        return 2

    configure()
    from django.core.management import execute_from_command_line

    execute_from_command_line(["basym"] + argv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
