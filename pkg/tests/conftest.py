import pathlib
import sys

try:
    import jcsim  # noqa: F401
except ImportError:  # running from a checkout without an editable install
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))
