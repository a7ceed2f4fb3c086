"""Request/response schemas for the experiment service."""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

AgentName = Literal["bin-dqn", "bin-ddpg", "dqn", "random", "exhaustive"]


class ConfigOverrides(BaseModel):
    """Flat experiment settings; unset fields keep the package defaults."""
    model_config = ConfigDict(extra="forbid")

    k: Optional[int] = None
    n_group: Optional[int] = None
    train_steps: Optional[int] = None
    eval_steps: Optional[int] = None
    carrier_freq_hz: Optional[float] = None
    tx_power_dbm: Optional[float] = None
    noise_power_dbm: Optional[float] = None
    ricean_kappa_db: Optional[float] = None
    bs_pos: Optional[Tuple[float, float, float]] = None
    ue_pos: Optional[Tuple[float, float, float]] = None
    ris_pos: Optional[Tuple[float, float, float]] = None
    discount: Optional[float] = None
    value_lr: Optional[float] = None
    policy_lr: Optional[float] = None
    batch_size: Optional[int] = None
    epsilon: Optional[float] = None
    target_period: Optional[int] = None
    target_tau: Optional[float] = None
    replay_capacity: Optional[int] = None
    dropout: Optional[float] = None
    optimizer: Optional[str] = None
    ou_mu: Optional[float] = None
    ou_theta: Optional[float] = None
    ou_sigma: Optional[float] = None
    ou_sigma_end: Optional[float] = None
    obs_scaling: Optional[bool] = None
    oracle_cap: Optional[int] = None

    def config_kwargs(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class RunRequest(ConfigOverrides):
    agent: AgentName
    n: int = Field(ge=1)
    seed: int = 0


class RunRecordModel(BaseModel):
    agent: str
    n: int
    k: int
    n_group: int
    seed: int
    train_steps: int
    eval_steps: int
    mean_rate: float
    std_rate: float
    wall_time_s: float


class SweepRequest(ConfigOverrides):
    preset: Optional[Literal["small", "large"]] = None
    agents: Optional[List[AgentName]] = None
    n_values: Optional[List[int]] = None
    seeds: Optional[List[int]] = None
    out_csv: Optional[str] = None
    wait: bool = True


class AggregateRowModel(BaseModel):
    agent: str
    n: int
    mean_rate: float
    std_rate: float
    seeds: int


class SweepResponse(BaseModel):
    job_id: Optional[str] = None
    status: Literal["queued", "running", "done", "failed"]
    records: List[RunRecordModel] = []
    aggregate: List[AggregateRowModel] = []
    out_csv: Optional[str] = None
    error: Optional[str] = None


class RealizationModel(BaseModel):
    """One channel realization as nested real/imag lists (row-major H)."""
    model_config = ConfigDict(extra="forbid")

    h_real: List[List[float]]
    h_imag: List[List[float]]
    g_real: List[float]
    g_imag: List[float]


class OracleRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    realization: Optional[RealizationModel] = None
    # or sample a fresh realization:
    n: Optional[int] = None
    k: Optional[int] = None
    seed: int = 0
    n_group: int = 1
    tx_power_dbm: float = 40.0
    noise_power_dbm: float = -100.0
    carrier_freq_hz: float = 5.0e9
    ricean_kappa_db: float = 30.0
    cap: int = 22


class OracleResponse(BaseModel):
    best_action: List[int]
    best_rate: float
    evaluations: int
    realization: RealizationModel


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class SelftestResponse(BaseModel):
    all_passed: bool
    checks: List[CheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str
