from freerider.cli import main

raise SystemExit(main())
