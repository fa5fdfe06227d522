import sys

from deformed_vibrations.cli import main

sys.exit(main())
