import sys

from todapencil.cli import main

sys.exit(main())
