"""python -m vws delegates to the experiment CLI."""

from .experiments.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
