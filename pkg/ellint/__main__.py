import sys

from ellint.cli import main

sys.exit(main())
