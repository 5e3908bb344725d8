import sys
import argparse
from src.core import VERIFY_CHECKS, execute

def add_common_args(parser: argparse.ArgumentParser):
    
    parser.add_argument(
        "--config",
        default="config/config.yml",
        help="path to YAML configuration file."
    )
    
    parser.add_argument(
        "--n",
        default=None,
        help="dimension(s): single value, a..b range or comma list"
    )
    
    parser.add_argument(
        "--res",
        default=None,
        help="grid points per axis (one value or one per dimension, comma separated)"
    )
    
    parser.add_argument(
        "--seeds",
        default=None,
        help="random seeds: a..b range or comma list"
    )
    
    parser.add_argument(
        "--amp",
        type=float,
        default=None,
        help="sup-norm of random perturbations"
    )
    
    parser.add_argument(
        "--max-mode",
        type=int,
        default=None,
        help="band limit of random fields"
    )
    
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="pass threshold of the checks"
    )
    
    parser.add_argument(
        "--max-iter",
        type=int,
        default=None,
        help="max number of solver iterations"
    )
    
    parser.add_argument(
        "--trials",
        type=int,
        default=None,
        help="number of rigidity trials"
    )
    
    parser.add_argument(
        "--output",
        default=None,
        help="where to save reports"
    )
    
    parser.add_argument(
        "--quiet",
        action="store_true",
        help="no progress output"
    )

def parse_args(argv=None) -> argparse.Namespace:
    
    parser = argparse.ArgumentParser(description="Q-curvature and Paneitz numerical lab on flat tori")
    subparsers = parser.add_subparsers(dest="command", required=True)
    
    verify = subparsers.add_parser("verify", help="numerical identity checks")
    verify.add_argument("check", choices=VERIFY_CHECKS, help="identity to check")
    add_common_args(verify)
    
    for command, help in [
        ("gbc", "Gauss-Bonnet-Chern on T⁴ and S⁴"),
        ("models", "closed form identities on Einstein models"),
        ("prescribe", "prescribed Q-curvature solver"),
        ("rigidity", "second variation sign and cubic remainder"),
        ("secondvar", "second variation of ℱ against nested differences")
    ]:
        add_common_args(subparsers.add_parser(command, help=help))

    return parser.parse_args(argv)

if __name__ == "__main__":
    args = parse_args()
    sys.exit(execute(args))
