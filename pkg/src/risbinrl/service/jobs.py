"""Background sweep jobs: one worker thread per submitted sweep."""

import threading
import uuid
from dataclasses import dataclass, field
from typing import List, Optional

from ..harness import ExperimentConfig, RunRecord, run_sweep


@dataclass
class SweepJob:
    job_id: str
    cfg: ExperimentConfig
    out_csv: Optional[str]
    status: str = "queued"            # queued | running | done | failed
    records: List[RunRecord] = field(default_factory=list)
    error: Optional[str] = None


class JobRegistry:
    def __init__(self):
        self._jobs = {}
        self._lock = threading.Lock()

    def submit(self, cfg: ExperimentConfig, out_csv: Optional[str]) -> SweepJob:
        job = SweepJob(job_id=uuid.uuid4().hex, cfg=cfg, out_csv=out_csv)
        with self._lock:
            self._jobs[job.job_id] = job
        thread = threading.Thread(target=self._run, args=(job,), daemon=True)
        thread.start()
        return job

    def _run(self, job: SweepJob) -> None:
        with self._lock:
            job.status = "running"

        def on_record(rec: RunRecord):
            with self._lock:
                job.records.append(rec)

        try:
            run_sweep(job.cfg, out_csv=job.out_csv, on_record=on_record)
            with self._lock:
                job.status = "done"
        except Exception as exc:
            with self._lock:
                job.status = "failed"
                job.error = f"{type(exc).__name__}: {exc}"

    def get(self, job_id: str) -> Optional[SweepJob]:
        with self._lock:
            return self._jobs.get(job_id)

    def snapshot(self, job: SweepJob):
        with self._lock:
            return job.status, list(job.records), job.error
