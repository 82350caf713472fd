import sys

from stackevo.cli import main

sys.exit(main())
