import os
from src.io import save_field
from src.fields import MetricField
from typing import Dict, List, Optional, Tuple

class SolverCheckpoint:
    
    def __init__(
        self,
        output_dir: Optional[str] = None,
        monitor: str = "residual",
        mode: str = "min",
        patience: int = 5
    ) -> None:
        """keeps the best iterate of the prescribing solver and counts non improving iterations.
        With an output dir the best metric is written to disk whenever it improves.

        Args:
            output_dir (str, optional): where a checkpoints folder will hold .npz metrics. Defaults to None.
            monitor (str, optional): metric to monitor. Defaults to "residual".
            mode (str, optional): mode to check metric to monitor. Defaults to "min".
            patience (int, optional): how many iterations to wait before stopping if the monitored metric does not improve. Defaults to 5.
        """
        assert mode in ["max", "min"], f"Mode {mode} not supported. Choose between max or min."
        assert patience >= 1, f"Patience must be >= 1, not {patience}"
        self.output_dir = None if output_dir is None else os.path.join(output_dir, "checkpoints")
        if self.output_dir is not None:
            os.makedirs(self.output_dir, exist_ok=True)
        self.monitor = monitor
        self.mode = mode
        self.patience = patience
        self.history: List[Tuple[float, int]] = [] # each el is a Tuple of (val, iteration)

        # support fields
        self.patience_count = 0
        self.best_iteration: Optional[int] = None
        self.best_metric: Optional[MetricField] = None
        self.saved_path: Optional[str] = None

    @property
    def best_val(self) -> Optional[float]:
        """returns best value of history sequence"""
        if len(self.history) == 0:
            return None
        pick = min if self.mode == "min" else max
        return pick(self.history, key=lambda x: x[0])[0]

    def _improves(self, val: float) -> bool:
        best = self.best_val
        if best is None:
            return True
        return val < best if self.mode == "min" else val > best

    @property
    def patience_over(self) -> bool:
        """checks if patience is over

        Returns:
            bool: True if patience over, False otherwise
        """
        return self.patience_count >= self.patience

    def _create_filename(self, iteration: int, metrics: Dict[str, float]) -> str:
        base_filename = f"iter={iteration}"
        for k in sorted(metrics.keys()):
            base_filename += f"-{k}={metrics[k]:.3e}"
        return f"{base_filename}.npz"

    def save(self, iteration: int, metrics: Dict[str, float], metric: MetricField):
        """writes the metric and removes the previous best one"""
        if self.output_dir is None:
            return
        if self.saved_path is not None and os.path.exists(self.saved_path):
            os.remove(self.saved_path)
        path = os.path.join(self.output_dir, self._create_filename(iteration, metrics))
        save_field(path, metric)
        self.saved_path = path

    def step(self, iteration: int, metrics: Dict[str, float], metric: MetricField) -> bool:
        """updates checkpoint data with a new iterate

        Args:
            iteration (int): current iteration
            metrics (Dict[str, float]): iterate metrics, must hold the monitored one
            metric (MetricField): current iterate

        Returns:
            bool: True if the iterate is the new best one
        """
        val = metrics[self.monitor]
        improved = self._improves(val)
        self.history.append((val, iteration))
        if improved:
            self.patience_count = 0
            self.best_iteration = iteration
            self.best_metric = metric
            self.save(iteration, metrics, metric)
        else:
            self.patience_count += 1
        return improved
