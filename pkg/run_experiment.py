"""
Batch entry point for the ground-state phase-estimation simulator
Usage: python run_experiment.py {run,sweep,fixtures,verify} --config path/to/config.json
"""
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.experiments.cli import main

if __name__ == "__main__":
    sys.exit(main())
