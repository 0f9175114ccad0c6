"""Allow `python -m esym_order`."""

from .verify_cli import main

raise SystemExit(main())
