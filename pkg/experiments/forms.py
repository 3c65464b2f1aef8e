"""
This module contains the experiment configuration form.

An experiment is configured by a JSON object. `ExperimentConfigForm` validates it field by field
(unknown keys are errors) and turns it into an immutable `ExperimentConfig`. Missing keys take
the initial value of their field.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from django import forms
from django.core.exceptions import ValidationError

from gnn.model import RELU, Activation, Architecture
from training.trainer import TrainConfig

SOURCE_LOCALIZATION = "source-localization"
AUTHORSHIP = "authorship"

EDGE_LIST = "edge-list"
RANDOM_GEOMETRIC = "random-geometric"
STOCHASTIC_BLOCK = "stochastic-block"

DEFAULT_ARCHITECTURES = ["relu", "dynamic-median:1", "dynamic-median:2"]


class ActivationField(forms.CharField):
    """
    An activation string such as "relu", "med:1" or "dyn-med:2".

    Median activations must reach at least one hop.
    """

    def to_python(self, value):
        value = super().to_python(value)
        if value in self.empty_values:
            return None
        try:
            activation = Activation.parse(value)
        except ValueError as error:
            raise ValidationError(str(error), code="invalid") from None
        if activation.kind != RELU and activation.reach < 1:
            raise ValidationError(f"{activation.kind} needs a reach of at least 1", code="invalid")
        return activation


class ActivationListField(forms.Field):
    """A non-empty list of activations, given as a JSON list or a comma-separated string."""

    def to_python(self, value):
        if value in self.empty_values:
            return []
        items = value.split(",") if isinstance(value, str) else value
        if not isinstance(items, (list, tuple)):
            raise ValidationError("expected a list of activations", code="invalid")
        field = ActivationField()
        activations = [field.clean(item) for item in items]
        labels = [activation.label for activation in activations]
        if len(set(labels)) != len(labels):
            raise ValidationError("architectures are listed twice", code="invalid")
        return activations


class WidthsField(forms.Field):
    """Filter-bank widths: one positive integer or a list of them, one per layer."""

    def to_python(self, value):
        if value in self.empty_values:
            return ()
        items = value if isinstance(value, (list, tuple)) else [value]
        try:
            widths = tuple(int(item) for item in items)
        except (TypeError, ValueError):
            raise ValidationError("filter widths must be integers", code="invalid") from None
        if not widths or min(widths) < 1:
            raise ValidationError("filter widths must be positive", code="invalid")
        return widths


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated experiment configuration; see `ExperimentConfigForm` for the fields.

    Methods:
        `train_config()`: The training hyperparameters of one round
        `architecture()`: The network shape for one activation
        `as_json()`: A JSON-ready dictionary with activations as text
    """

    task: str
    graph: str
    graph_kind: str
    nodes: int
    directed: bool
    radius: float
    blocks: int
    p_in: float
    p_out: float
    corpus: str
    function_words: str
    author: str
    activation: Activation
    architectures: tuple
    filters: tuple
    taps: int
    classes: int
    train_samples: int
    test_samples: int
    t_min: int
    t_max: int
    diffusion_gso: str
    neighborhood_direction: str
    window: int
    wan_normalize: bool
    excerpt_length: int
    train_fraction: float
    epochs: int
    batch_size: int
    learning_rate: float
    beta1: float
    beta2: float
    epsilon: float
    validation_fraction: float
    rounds: int
    seed: int
    out: str

    def train_config(self, seed):
        return TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
            validation_fraction=self.validation_fraction,
            seed=seed,
        )

    def architecture(self, activation, n_nodes, classes):
        return Architecture(
            n_nodes=n_nodes,
            filters=self.filters,
            taps=self.taps,
            activation=activation,
            classes=classes,
        )

    def as_json(self):
        document = asdict(self)
        document["activation"] = self.activation.label
        document["architectures"] = [activation.label for activation in self.architectures]
        document["filters"] = list(self.filters)
        return document


class ExperimentConfigForm(forms.Form):
    """
    A form validating an experiment configuration document.

    Methods:
        `from_document()`: Builds a bound form from a JSON object plus overrides
        `experiment_config()`: The validated `ExperimentConfig`
        `error_text()`: All field errors as "field: message" lines
    """

    TASK_CHOICES = [
        (SOURCE_LOCALIZATION, "Source localization"),
        (AUTHORSHIP, "Authorship attribution"),
    ]
    GRAPH_KIND_CHOICES = [
        (EDGE_LIST, "Edge-list file"),
        (RANDOM_GEOMETRIC, "Random geometric graph"),
        (STOCHASTIC_BLOCK, "Stochastic block model"),
    ]
    GSO_CHOICES = [("normalized", "Eigenvalue-normalized adjacency"), ("raw", "Raw adjacency")]
    DIRECTION_CHOICES = [("in", "In-neighbors"), ("out", "Out-neighbors")]

    task = forms.ChoiceField(choices=TASK_CHOICES, initial=SOURCE_LOCALIZATION)

    # Source localization
    graph = forms.CharField(required=False, initial="")
    graph_kind = forms.ChoiceField(choices=GRAPH_KIND_CHOICES, initial=RANDOM_GEOMETRIC)
    nodes = forms.IntegerField(min_value=2, initial=40)
    directed = forms.BooleanField(required=False, initial=False)
    radius = forms.FloatField(min_value=0.0, initial=0.3)
    blocks = forms.IntegerField(min_value=1, initial=4)
    p_in = forms.FloatField(min_value=0.0, max_value=1.0, initial=0.3)
    p_out = forms.FloatField(min_value=0.0, max_value=1.0, initial=0.02)
    classes = forms.IntegerField(min_value=2, initial=5)
    train_samples = forms.IntegerField(min_value=1, initial=10_000)
    test_samples = forms.IntegerField(min_value=1, initial=200)
    t_min = forms.IntegerField(min_value=0, initial=0)
    t_max = forms.IntegerField(min_value=0, initial=4)
    diffusion_gso = forms.ChoiceField(choices=GSO_CHOICES, initial="normalized")

    # Authorship
    corpus = forms.CharField(required=False, initial="")
    function_words = forms.CharField(required=False, initial="")
    author = forms.CharField(required=False, initial="")
    window = forms.IntegerField(min_value=1, initial=10)
    wan_normalize = forms.BooleanField(required=False, initial=False)
    excerpt_length = forms.IntegerField(min_value=1, initial=1_000)
    train_fraction = forms.FloatField(min_value=0.0, max_value=1.0, initial=0.8)

    # Network
    activation = ActivationField(initial="relu")
    architectures = ActivationListField(initial=DEFAULT_ARCHITECTURES)
    filters = WidthsField(initial=[32])
    taps = forms.IntegerField(min_value=1, initial=5)
    neighborhood_direction = forms.ChoiceField(choices=DIRECTION_CHOICES, initial="in")

    # Training
    epochs = forms.IntegerField(min_value=1, initial=40)
    batch_size = forms.IntegerField(min_value=1, initial=100)
    learning_rate = forms.FloatField(min_value=0.0, initial=0.001)
    beta1 = forms.FloatField(min_value=0.0, max_value=0.999999, initial=0.9)
    beta2 = forms.FloatField(min_value=0.0, max_value=0.999999, initial=0.999)
    epsilon = forms.FloatField(initial=1e-8)
    validation_fraction = forms.FloatField(min_value=0.0, max_value=0.9, initial=0.1)

    # Protocol
    rounds = forms.IntegerField(min_value=1, initial=10)
    seed = forms.IntegerField(min_value=0, initial=0)
    out = forms.CharField(initial="out")

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.unknown_keys = sorted(set(self.data) - set(self.fields)) if self.is_bound else []

    @classmethod
    def initial_values(cls):
        """The value every field takes when the document leaves it out."""
        return {name: field.initial for name, field in cls.base_fields.items()}

    @classmethod
    def from_document(cls, document=None, **overrides):
        """
        Builds a bound form.

        Args:
            document (dict | None): The parsed JSON configuration.
            **overrides: Values that replace document values, e.g. from command-line flags;
                None values are ignored.

        Returns:
            ExperimentConfigForm: The bound form.
        """
        if document is not None and not isinstance(document, dict):
            raise ValidationError("the configuration must be a JSON object", code="invalid")
        data = cls.initial_values()
        data.update({key: value for key, value in (document or {}).items() if value is not None})
        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls(data=data)

    @classmethod
    def from_file(cls, path, **overrides):
        """Reads a JSON configuration file; a None path gives the defaults plus overrides."""
        document = None
        if path is not None:
            try:
                document = json.loads(Path(path).read_text(encoding="utf-8"))
            except OSError as error:
                raise ValidationError(f"cannot read configuration {path}: {error}") from error
            except json.JSONDecodeError as error:
                raise ValidationError(f"configuration {path} is not valid JSON: {error}") from None
        return cls.from_document(document, **overrides)

    def clean(self):
        """
        Rejects unknown keys and checks the fields that depend on each other.
        """
        cleaned_data = super().clean()
        for key in self.unknown_keys:
            self.add_error(None, f"unknown configuration key '{key}'")

        task = cleaned_data.get("task")
        if task == SOURCE_LOCALIZATION:
            if cleaned_data.get("graph_kind") == EDGE_LIST and not cleaned_data.get("graph"):
                self.add_error("graph", "an edge-list graph needs a file path")
            t_min, t_max = cleaned_data.get("t_min"), cleaned_data.get("t_max")
            if t_min is not None and t_max is not None and t_min > t_max:
                self.add_error("t_min", "t_min must not exceed t_max")
            nodes, classes = cleaned_data.get("nodes"), cleaned_data.get("classes")
            if (
                cleaned_data.get("graph_kind") != EDGE_LIST
                and nodes is not None
                and classes is not None
                and classes > nodes
            ):
                self.add_error("classes", f"cannot pick {classes} source nodes from {nodes}")
        elif task == AUTHORSHIP:
            if not cleaned_data.get("corpus"):
                self.add_error("corpus", "the authorship task needs a corpus directory")
            if not cleaned_data.get("author"):
                self.add_error("author", "the authorship task needs a target author")

        train_fraction = cleaned_data.get("train_fraction")
        if train_fraction is not None and not 0 < train_fraction < 1:
            self.add_error("train_fraction", "train_fraction must lie strictly between 0 and 1")
        epsilon = cleaned_data.get("epsilon")
        if epsilon is not None and epsilon <= 0:
            self.add_error("epsilon", "epsilon must be positive")
        if not cleaned_data.get("architectures") and "architectures" not in self.errors:
            self.add_error("architectures", "at least one architecture is required")
        return cleaned_data

    def experiment_config(self):
        """
        Returns the validated configuration.

        Raises:
            ValidationError: If the form is invalid, with every error message.
        """
        if not self.is_valid():
            raise ValidationError(self.error_text())
        values = dict(self.cleaned_data, architectures=tuple(self.cleaned_data["architectures"]))
        return ExperimentConfig(**values)

    def error_text(self):
        lines = []
        for field, errors in self.errors.items():
            prefix = "config" if field == "__all__" else field
            lines.extend(f"{prefix}: {error}" for error in errors)
        return "\n".join(lines)
