"""Entry point for the tree-hardy command line."""

import sys

from .cli import main as cli_main


def main() -> None:
    """Main entry point for tree-hardy."""
    try:
        sys.exit(cli_main())
    except KeyboardInterrupt:
        print("\nInterrupted.", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
