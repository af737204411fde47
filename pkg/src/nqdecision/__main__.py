import sys

from nqdecision.cli import main

sys.exit(main())
