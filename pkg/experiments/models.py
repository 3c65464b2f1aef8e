"""
This module contains the models for the experiments application.

The included models are:
    - Experiment
    - RoundRecord

Rows are only written when settings.RECORD_RUNS is enabled; the CSV exports are the primary
output of a run.
"""

from django.core.validators import MaxValueValidator, MinValueValidator
from django.db import models, transaction
from django.utils import timezone

from model_utils import Choices, FieldTracker
from model_utils.fields import StatusField


class Experiment(models.Model):
    """
    This model represents one `compare` invocation.

    Attributes:
        task (CharField): "source-localization" or "authorship"
        config (JSONField): The validated experiment configuration
        out_dir (CharField): Directory the result files were written to
        status (StatusField): "Running", "Completed" or "Failed". Defaults to "Running".
        started (DateTimeField): When the run started
        finished (DateTimeField): When the run completed or failed
        error (TextField): The error message of a failed run

    Tracking:
        tracker (FieldTracker): Tracks changes to "status"

    Methods:
        `record()`: Stores the result of one round and architecture
        `finish()`: Marks the run completed, or failed with an error message
        `__str__()`: Represents the Experiment object as a string
    """

    class Meta:
        """
        Meta class for Experiment model.

        Attributes:
            db_table (str): Name of database table for the experiments to be stored in
            managed (bool): Indicates if lifecycle of the table during migrations is managed or not.
            ordering (list[str]): Newest experiments first
        """

        db_table = "experiments_experiment"
        managed = True
        ordering = ["-started"]

    SOURCE_LOCALIZATION = "source-localization"
    AUTHORSHIP = "authorship"

    TASK_CHOICES = {
        SOURCE_LOCALIZATION: "Source localization",
        AUTHORSHIP: "Authorship attribution",
    }

    STATUS = Choices("Running", "Completed", "Failed")

    task = models.CharField(choices=TASK_CHOICES, default=SOURCE_LOCALIZATION, max_length=20)
    config = models.JSONField(default=dict)
    out_dir = models.CharField(max_length=500)
    status = StatusField(db_index=True, default="Running")
    started = models.DateTimeField(default=timezone.now)
    finished = models.DateTimeField(null=True, blank=True)
    error = models.TextField(blank=True)

    tracker = FieldTracker(fields=["status"])

    def record(self, result):
        """
        Stores a runner result.

        Args:
            result (experiments.runner.RoundResult): The result of one round and architecture.

        Returns:
            RoundRecord: The created row.
        """
        return RoundRecord.objects.create(
            experiment=self,
            architecture=result.architecture,
            round_index=result.round_index,
            seed=result.seed,
            test_accuracy=result.test_accuracy,
            final_train_loss=result.final_train_loss,
            parameters=result.parameters,
            seconds=result.seconds,
            dataset_hash=result.dataset_hash,
        )

    def finish(self, error=None):
        """Sets the final status and the finishing time."""
        self.status = self.STATUS.Failed if error else self.STATUS.Completed
        self.error = str(error) if error else ""
        self.finished = timezone.now()
        with transaction.atomic():
            self.save()

    def __str__(self) -> str:
        """
        Represents the Experiment object as a string.

        Returns:
            str: The task, primary key and status.
        """
        return f"{self.TASK_CHOICES.get(self.task, self.task)} #{self.pk} ({self.status})"


class RoundRecord(models.Model):
    """
    This model represents the outcome of one architecture in one round.

    Attributes:
        experiment (ForeignKey): The experiment the round belongs to
        architecture (CharField): Activation label, e.g. "dynamic-median:2"
        round_index (PositiveIntegerField): 0-based round
        seed (IntegerField): Dataset and initialization seed of the round
        test_accuracy (FloatField): Accuracy on the test set, in [0, 1]
        final_train_loss (FloatField): Loss of the trained model on its training set
        parameters (PositiveIntegerField): Trainable parameters of the graph layers
        seconds (FloatField): Wall-clock time of training and evaluation
        dataset_hash (CharField): SHA-256 of the round's dataset file text
    """

    class Meta:
        """
        Meta class for RoundRecord model.

        Attributes:
            verbose_name (str): The human readable name for RoundRecord
            verbose_name_plural (str): The plural version of RoundRecord's human readable name
            db_table (str): Name of database table for the round records to be stored in
            constraints (list): One row per experiment, architecture and round
            ordering (list[str]): Round order, then architecture
        """

        verbose_name = "Round Record"
        verbose_name_plural = "Round Records"
        db_table = "experiments_roundrecord"
        constraints = [
            models.UniqueConstraint(
                fields=["experiment", "architecture", "round_index"],
                name="unique_round_per_architecture",
            )
        ]
        ordering = ["round_index", "architecture"]

    experiment = models.ForeignKey(Experiment, on_delete=models.CASCADE, related_name="rounds")
    architecture = models.CharField(max_length=40)
    round_index = models.PositiveIntegerField()
    seed = models.IntegerField()
    test_accuracy = models.FloatField(validators=[MinValueValidator(0.0), MaxValueValidator(1.0)])
    final_train_loss = models.FloatField()
    parameters = models.PositiveIntegerField()
    seconds = models.FloatField(default=0.0)
    dataset_hash = models.CharField(max_length=64)

    def __str__(self) -> str:
        return f"{self.architecture} round {self.round_index}: {self.test_accuracy:.4f}"
