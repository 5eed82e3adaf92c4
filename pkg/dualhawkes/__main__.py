"""python -m dualhawkes"""

import sys

from .commands import main

sys.exit(main())
