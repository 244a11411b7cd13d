"""Module entry point: ``python -m fecmux`` runs the simulate CLI."""

from .harness import main

if __name__ == "__main__":
    raise SystemExit(main())
