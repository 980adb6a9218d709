from fanplanar.cli import main
import sys

sys.exit(main())
