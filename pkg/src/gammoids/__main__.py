import sys

from gammoids.cli import main

sys.exit(main())
