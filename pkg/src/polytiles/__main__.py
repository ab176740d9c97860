import sys

from polytiles.cli import main

sys.exit(main())
