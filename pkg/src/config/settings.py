"""Configuration settings for the ground-state phase-estimation simulator"""
from pathlib import Path
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings with environment variable support"""

    # Application metadata
    app_name: str = "Ground State QPE Simulator"
    debug: bool = False
    log_level: str = "INFO"
    log_file: str = ""

    # Simulation budgets
    max_grid_points: int = 2 ** 22  # m^d accepted by build_grid
    max_state_amplitudes: int = 2 ** 24  # 2^b * (2^q)^d for a QpeState
    dense_threshold: int = 4096  # m^d for dense eigensolves and exact propagators
    empirical_threshold: int = 1024  # m^d for measured splitting errors

    # Potential queries
    query_bits_offset: int = 4  # default query bits = q + offset

    # Spectral oracle
    eigen_tolerance: float = 1e-12
    max_iterations: int = 5000
    residual_factor: float = 1e-8
    overlap_count: int = 16

    # Phase estimation
    norm_tolerance: float = 1e-10
    max_splitting_steps: int = 2 ** 14

    # Experiment outputs
    default_top_k: int = 8
    demo_shots: int = 256
    sweep_workers: int = 1

    # Paths
    base_path: Path = Path(__file__).parent.parent.parent
    data_path: Path = Path(__file__).parent.parent.parent / "data"
    reports_path: Path = Path(__file__).parent.parent.parent / "data" / "reports"
    fixtures_path: Path = Path(__file__).parent.parent.parent / "data" / "fixtures"

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"  # Ignore extra fields in .env

    def default_query_bits(self, q: int) -> int:
        """Fixed-point width used for potential queries on a 2^-q mesh"""
        return q + self.query_bits_offset


# Global settings instance
settings = Settings()
