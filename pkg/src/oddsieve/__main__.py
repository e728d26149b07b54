import sys

from oddsieve.cli import main

sys.exit(main())
