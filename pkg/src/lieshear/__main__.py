import sys
from lieshear.cli import main
sys.exit(main())
