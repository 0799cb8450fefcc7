"""
ebss/db.py

SQLite persistence layer for benchmark runs.

This module:
- creates tables
- writes run metadata (config echo as JSON)
- writes per-instance records and the driver's per-iteration log
- reads records back for summaries
"""

from __future__ import annotations

import json
import os
import sqlite3
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from ebss.driver import IterationLog, Phase
from ebss.report import RunRecord


class RunDB:
    def __init__(self, path: str, fast_mode: bool = False, batch_size: Optional[int] = None) -> None:
        self.path = path
        self.fast_mode = bool(fast_mode)
        if batch_size is None:
            batch_size = int(os.getenv("EBSS_DB_BATCH_SIZE", "500"))
        self.batch_size = max(1, int(batch_size))
        self._record_buffer: list[tuple] = []
        self._iteration_buffer: list[tuple] = []
        self.conn = sqlite3.connect(path)
        self.conn.execute("PRAGMA journal_mode=WAL;")
        if self.fast_mode:
            self.conn.execute("PRAGMA synchronous=OFF;")
            self.conn.execute("PRAGMA temp_store=MEMORY;")
        self._ensure_schema()

    def __enter__(self) -> "RunDB":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        self.flush()
        self.conn.close()

    def flush(self) -> None:
        """Write buffered rows (fast_mode) and commit."""
        if self._record_buffer:
            self.conn.executemany(_INSERT_RECORD, self._record_buffer)
            self._record_buffer.clear()
        if self._iteration_buffer:
            self.conn.executemany(_INSERT_ITERATION, self._iteration_buffer)
            self._iteration_buffer.clear()
        self.conn.commit()

    def _ensure_schema(self) -> None:
        self.conn.executescript(
            """
            CREATE TABLE IF NOT EXISTS runs (
              run_id TEXT PRIMARY KEY,
              created_at_utc TEXT NOT NULL,
              domain TEXT NOT NULL,
              algorithm TEXT NOT NULL,
              label TEXT NOT NULL,
              config_json TEXT NOT NULL
            );

            CREATE TABLE IF NOT EXISTS records (
              run_id TEXT NOT NULL,
              seq INTEGER NOT NULL,
              instance TEXT NOT NULL,
              label TEXT NOT NULL,
              domain TEXT NOT NULL,
              algorithm TEXT NOT NULL,
              c1 TEXT NOT NULL,
              c2 TEXT NOT NULL,
              delta INTEGER NOT NULL,
              resolution INTEGER NOT NULL,
              seed INTEGER NOT NULL,
              status TEXT NOT NULL,
              cost_int TEXT,
              cost_raw TEXT,
              expansions INTEGER NOT NULL,
              generations INTEGER NOT NULL,
              heval INTEGER NOT NULL,
              time_s REAL NOT NULL,
              peak_rss_kb INTEGER,
              problem_size INTEGER,
              error TEXT,
              PRIMARY KEY (run_id, seq)
            );

            CREATE TABLE IF NOT EXISTS iterations (
              run_id TEXT NOT NULL,
              instance TEXT NOT NULL,
              seq INTEGER NOT NULL,
              round INTEGER NOT NULL,
              phase TEXT NOT NULL,
              f_max TEXT NOT NULL,
              n_min INTEGER,
              n_max INTEGER,
              expanded INTEGER NOT NULL,
              status TEXT NOT NULL,
              cache_hit INTEGER NOT NULL,
              PRIMARY KEY (run_id, instance, seq)
            );
            """
        )
        self.conn.commit()

    def insert_run(self, run_id: str, domain: str, algorithm: str, label: str, config: dict) -> None:
        created = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        self.conn.execute(
            """
            INSERT OR REPLACE INTO runs(run_id, created_at_utc, domain, algorithm, label, config_json)
            VALUES (?,?,?,?,?,?)
            """,
            (run_id, created, domain, algorithm, label, json.dumps(config, sort_keys=True, default=str)),
        )
        self.conn.commit()

    def insert_record(self, run_id: str, seq: int, record: RunRecord) -> None:
        # Costs as text: raw costs are exact fractions.
        row = (
            run_id,
            seq,
            record.instance,
            record.label,
            record.domain,
            record.algorithm,
            record.c1,
            record.c2,
            record.delta,
            record.resolution,
            record.seed,
            record.status,
            None if record.cost_int is None else str(record.cost_int),
            None if record.cost_raw is None else str(record.cost_raw),
            record.expansions,
            record.generations,
            record.heuristic_evals,
            record.time_s,
            record.peak_rss_kb,
            record.problem_size,
            record.error,
        )
        its = [
            (
                run_id,
                record.instance,
                i,
                it.round,
                it.phase.value,
                str(it.f_max),
                it.n_min,
                it.n_max,
                it.expanded_nodes,
                it.status,
                int(it.cache_hit),
            )
            for i, it in enumerate(record.iterations)
        ]
        if self.fast_mode:
            self._record_buffer.append(row)
            self._iteration_buffer.extend(its)
            if len(self._record_buffer) >= self.batch_size:
                self.flush()
            return
        self.conn.execute(_INSERT_RECORD, row)
        if its:
            self.conn.executemany(_INSERT_ITERATION, its)
        self.conn.commit()

    def get_latest_run_id(self) -> str:
        row = self.conn.execute("SELECT run_id FROM runs ORDER BY created_at_utc DESC, run_id DESC LIMIT 1").fetchone()
        if not row:
            raise RuntimeError("No runs found in runs table")
        return str(row[0])

    def get_run(self, run_id: str) -> dict:
        row = self.conn.execute(
            "SELECT run_id, created_at_utc, domain, algorithm, label, config_json FROM runs WHERE run_id=?",
            (run_id,),
        ).fetchone()
        if not row:
            raise RuntimeError(f"run_id not found: {run_id}")
        return {
            "run_id": row[0],
            "created_at_utc": row[1],
            "domain": row[2],
            "algorithm": row[3],
            "label": row[4],
            "config": json.loads(row[5]),
        }

    def load_records(self, run_id: str) -> list[RunRecord]:
        iters: dict[str, list[IterationLog]] = {}
        for inst, rnd, phase, f_max, n_min, n_max, expanded, status, hit in self.conn.execute(
            """
            SELECT instance, round, phase, f_max, n_min, n_max, expanded, status, cache_hit
            FROM iterations WHERE run_id=? ORDER BY instance, seq
            """,
            (run_id,),
        ):
            iters.setdefault(inst, []).append(
                IterationLog(
                    round=rnd,
                    phase=Phase(phase),
                    f_max=int(f_max),
                    n_min=n_min,
                    n_max=n_max,
                    expanded_nodes=expanded,
                    status=status,
                    cache_hit=bool(hit),
                )
            )
        out = []
        for row in self.conn.execute(
            """
            SELECT instance, label, domain, algorithm, c1, c2, delta, resolution, seed, status,
                   cost_int, cost_raw, expansions, generations, heval, time_s, peak_rss_kb,
                   problem_size, error
            FROM records WHERE run_id=? ORDER BY seq
            """,
            (run_id,),
        ):
            (inst, label, domain, algorithm, c1, c2, delta, resolution, seed, status,
             cost_int, cost_raw, exp, gen, heval, time_s, rss, size, error) = row
            out.append(
                RunRecord(
                    label=label,
                    domain=domain,
                    algorithm=algorithm,
                    c1=c1,
                    c2=c2,
                    delta=delta,
                    resolution=resolution,
                    seed=seed,
                    instance=inst,
                    status=status,
                    cost_int=None if cost_int is None else int(cost_int),
                    cost_raw=None if cost_raw is None else Fraction(cost_raw),
                    expansions=exp,
                    generations=gen,
                    heuristic_evals=heval,
                    time_s=time_s,
                    peak_rss_kb=rss,
                    problem_size=size,
                    error=error,
                    iterations=iters.get(inst, []),
                )
            )
        return out


_INSERT_RECORD = """
    INSERT OR REPLACE INTO records
      (run_id, seq, instance, label, domain, algorithm, c1, c2, delta, resolution, seed, status,
       cost_int, cost_raw, expansions, generations, heval, time_s, peak_rss_kb, problem_size, error)
    VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?)
"""

_INSERT_ITERATION = """
    INSERT OR REPLACE INTO iterations
      (run_id, instance, seq, round, phase, f_max, n_min, n_max, expanded, status, cache_hit)
    VALUES (?,?,?,?,?,?,?,?,?,?,?)
"""
