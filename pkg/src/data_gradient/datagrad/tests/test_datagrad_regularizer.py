import hypothesis
import hypothesis.extra.numpy
import hypothesis.strategies
import numpy
import pytest

from data_gradient.data import Batch
from data_gradient.datagrad import (
    RegularizerKind,
    TrainConfig,
    WeightPenalty,
    adversarial_direction,
    datagrad_step,
    descend,
    fd_regularizer_grad,
    finite_difference,
    immediate_gradient,
    make_adversarial,
    penalise,
    reg_value,
    sgd_step,
)
from data_gradient.network import (
    NetworkParams,
    NumericalFailureError,
    ParameterGradients,
    backward,
    forward,
    init_he,
)
from data_gradient.tensor import Matrix, Vector

ORACLE_STEP = 1e-4
SAMPLE = Vector(data=[0.6, 0.4])


def network_from_arrays(
    weights: list[numpy.ndarray], biases: list[numpy.ndarray]
) -> NetworkParams:
    return NetworkParams(
        layer_sizes=[weights[0].shape[1], *(weight.shape[0] for weight in weights)],
        weights=[Matrix(data=weight) for weight in weights],
        biases=[Vector(data=bias) for bias in biases],
        seed=0,
    )


@pytest.fixture(name="small_network")
def fixture_small_network() -> NetworkParams:
    # hidden pre-activations are 0.5 and 0.7 at SAMPLE, far from the rectifier kink
    return network_from_arrays(
        [numpy.array([[1.0, -0.5], [0.3, 0.8]]), numpy.array([[0.7, -1.2], [-0.4, 0.9]])],
        [numpy.array([0.1, 0.2]), numpy.array([0.05, -0.1])],
    )


def random_batch(features: int, count: int, classes: int, seed: int) -> Batch:
    generator = numpy.random.default_rng(seed)

    return Batch(
        images=Matrix(data=generator.uniform(size=(features, count))),
        labels=generator.integers(0, classes, size=count),
    )


def flatten(gradients: ParameterGradients) -> numpy.ndarray:
    return numpy.concatenate(
        [operand.data.ravel() for operand in [*gradients.weight_grads, *gradients.bias_grads]]
    )


def regularizer_oracle(params: NetworkParams, kind: RegularizerKind) -> numpy.ndarray:
    """Central differences of R(dL/dd) with respect to every weight and bias."""
    weights = [weight.data.copy() for weight in params.weights]
    biases = [bias.data.copy() for bias in params.biases]

    def value() -> float:
        network = network_from_arrays(weights, biases)
        result = backward(network, forward(network, SAMPLE), 0)

        return reg_value(kind, result.data_gradient)

    gradient: list[numpy.ndarray] = []
    for array in [*weights, *biases]:
        for index in numpy.ndindex(array.shape):
            original = array[index]

            array[index] = original + ORACLE_STEP
            upper = value()
            array[index] = original - ORACLE_STEP
            lower = value()
            array[index] = original

            gradient.append(numpy.array([(upper - lower) / (2 * ORACLE_STEP)]))

    return numpy.concatenate(gradient)


def relative_error(estimate: numpy.ndarray, reference: numpy.ndarray) -> float:
    return float(numpy.linalg.norm(estimate - reference) / numpy.linalg.norm(reference))


@pytest.mark.parametrize(
    ("kind", "values", "expected_value", "expected_gradient"),
    [
        (RegularizerKind.L1, [1.0, -2.0, 0.5], 3.5, [1.0, -1.0, 1.0]),
        (RegularizerKind.L2, [1.0, -2.0, 0.5], 5.25, [2.0, -4.0, 1.0]),
        (RegularizerKind.L1, [0.0, 0.0], 0.0, [0.0, 0.0]),
    ],
)
def test_regularizer_values_and_immediate_gradients(
    kind: RegularizerKind,
    values: list[float],
    expected_value: float,
    expected_gradient: list[float],
) -> None:
    assert reg_value(kind, Vector(data=values)) == pytest.approx(expected_value)
    assert immediate_gradient(kind, Vector(data=values)).data.tolist() == expected_gradient


def test_make_adversarial_moves_along_direction() -> None:
    perturbed = make_adversarial(Vector(data=[0.5, 0.5]), Vector(data=[1.0, -1.0]), 0.1)

    assert perturbed.data.tolist() == pytest.approx([0.6, 0.4])

    with pytest.raises(ValueError, match="finite"):
        make_adversarial(Vector(data=[0.5]), Vector(data=[1.0]), float("inf"))


@hypothesis.given(
    data=hypothesis.extra.numpy.arrays(
        numpy.float64,
        8,
        elements=hypothesis.strategies.floats(min_value=0.0, max_value=1.0),
    ),
    gradient=hypothesis.extra.numpy.arrays(
        numpy.float64,
        8,
        elements=hypothesis.strategies.floats(min_value=0.01, max_value=5.0)
        | hypothesis.strategies.floats(min_value=-5.0, max_value=-0.01),
    ),
    phi=hypothesis.strategies.floats(min_value=0.001, max_value=0.5),
)
def test_l1_direction_is_the_fast_gradient_sign(
    data: numpy.ndarray, gradient: numpy.ndarray, phi: float
) -> None:
    direction = adversarial_direction(RegularizerKind.L1, Vector(data=gradient))
    perturbed = make_adversarial(Vector(data=data), direction, phi)

    assert numpy.array_equal(direction.data, numpy.sign(gradient))
    numpy.testing.assert_allclose(numpy.abs(perturbed.data - data), phi, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("kind", [RegularizerKind.L1, RegularizerKind.L2])
def test_finite_difference_matches_mixed_partials(
    small_network: NetworkParams, kind: RegularizerKind
) -> None:
    trace = forward(small_network, SAMPLE)
    assert numpy.abs(trace.preactivations[0].data).min() > 0.2
    assert numpy.abs(backward(small_network, trace, 0).data_gradient.data).min() > 0.1

    estimate = fd_regularizer_grad(
        small_network, SAMPLE, 0, TrainConfig(reg_kind=kind, fd_step=ORACLE_STEP)
    )

    assert relative_error(flatten(estimate), regularizer_oracle(small_network, kind)) < 1e-3


def test_finite_difference_error_shrinks_with_the_step(small_network: NetworkParams) -> None:
    oracle = regularizer_oracle(small_network, RegularizerKind.L2)

    errors = [
        relative_error(
            flatten(
                fd_regularizer_grad(
                    small_network,
                    SAMPLE,
                    0,
                    TrainConfig(reg_kind=RegularizerKind.L2, fd_step=step),
                )
            ),
            oracle,
        )
        for step in (1e-2, 1e-3)
    ]

    assert errors[1] < errors[0] / 5


def test_zero_data_gradient_gives_zero_regularizer() -> None:
    saturated = network_from_arrays(
        [numpy.eye(2), numpy.array([[1000.0, 0.0], [0.0, 0.0]])], [numpy.zeros(2), numpy.zeros(2)]
    )

    for kind in RegularizerKind:
        estimate = fd_regularizer_grad(
            saturated, Vector(data=[1.0, 1.0]), 0, TrainConfig(reg_kind=kind)
        )

        assert not flatten(estimate).any()


def layer_updates(before: NetworkParams, after: NetworkParams) -> list[numpy.ndarray]:
    return [
        old.data - new.data
        for old, new in zip(
            [*before.weights, *before.biases], [*after.weights, *after.biases], strict=True
        )
    ]


def rearranged_update(
    clean: ParameterGradients, shifted: ParameterGradients, cfg: TrainConfig
) -> list[numpy.ndarray]:
    """Per layer ``eta * ((lambda0 - lambda1 / t) * xi + (lambda1 / t) * omega)``."""
    ratio = cfg.lambda1 / cfg.fd_step

    return [
        cfg.eta * ((cfg.lambda0 - ratio) * xi.data + ratio * omega.data)
        for xi, omega in zip(
            [*clean.weight_grads, *clean.bias_grads],
            [*shifted.weight_grads, *shifted.bias_grads],
            strict=True,
        )
    ]


def direction_of(kind: RegularizerKind, data_gradient: numpy.ndarray) -> numpy.ndarray:
    return numpy.sign(data_gradient) if kind is RegularizerKind.L1 else 2.0 * data_gradient


@pytest.mark.parametrize("kind", [RegularizerKind.L1, RegularizerKind.L2])
def test_update_matches_two_independent_passes(kind: RegularizerKind) -> None:
    params = init_he([4, 6, 3], seed=2)
    cfg = TrainConfig(eta=0.05, lambda0=0.8, lambda1=0.3, fd_step=0.05, reg_kind=kind)

    for step in range(50):
        batch = random_batch(4, 8, 3, seed=step)
        clean = backward(params, forward(params, batch.images), batch.labels)
        shifted_images = Matrix(
            data=batch.images.data + cfg.fd_step * direction_of(kind, clean.data_gradient.data)
        )
        shifted = backward(params, forward(params, shifted_images), batch.labels)

        stepped = datagrad_step(params, batch, cfg)

        for actual, expected in zip(
            layer_updates(params, stepped),
            rearranged_update(clean.gradients, shifted.gradients, cfg),
            strict=True,
        ):
            assert relative_error(actual, expected) < 1e-12
        params = stepped


def test_zero_lambda1_reproduces_plain_sgd_bitwise() -> None:
    regularised = init_he([4, 6, 3], seed=3)
    plain = init_he([4, 6, 3], seed=3)
    cfg = TrainConfig(eta=0.1, lambda1=0.0, reg_kind=RegularizerKind.L1)

    for step in range(100):
        batch = random_batch(4, 5, 3, seed=step)

        regularised = datagrad_step(regularised, batch, cfg)
        plain = sgd_step(plain, batch, cfg.eta)

    for first, second in zip(
        [*regularised.weights, *regularised.biases], [*plain.weights, *plain.biases], strict=True
    ):
        assert numpy.array_equal(first.data, second.data)


def test_zero_learning_rate_leaves_parameters_unchanged() -> None:
    params = init_he([4, 6, 3], seed=4)

    stepped = datagrad_step(
        params, random_batch(4, 5, 3, seed=0), TrainConfig(eta=0.0, lambda1=0.5)
    )

    for first, second in zip(params.weights, stepped.weights, strict=True):
        assert numpy.array_equal(first.data, second.data)


@pytest.mark.parametrize(
    ("kind", "expected"),
    [
        (RegularizerKind.L1, [[0.25, -0.25], [0.0, 0.25]]),
        (RegularizerKind.L2, [[1.0, -2.0], [0.0, 0.5]]),
    ],
)
def test_weight_penalty_skips_biases(kind: RegularizerKind, expected: list[list[float]]) -> None:
    weights = [Matrix(data=[[2.0, -4.0], [0.0, 1.0]])]
    gradients = ParameterGradients(
        weight_grads=[Matrix(data=numpy.zeros((2, 2)))], bias_grads=[Vector(data=[0.3, 0.4])]
    )

    penalised = penalise(gradients, weights, WeightPenalty(kind=kind, coefficient=0.25))

    assert penalised.weight_grads[0].data.tolist() == expected
    assert penalised.bias_grads[0].data.tolist() == [0.3, 0.4]
    assert penalise(gradients, weights, None) is gradients


def test_non_finite_values_are_reported_with_their_layer() -> None:
    clean = ParameterGradients(
        weight_grads=[Matrix(data=numpy.zeros((2, 2))), Matrix(data=numpy.zeros((1, 2)))],
        bias_grads=[Vector(data=numpy.zeros(2)), Vector(data=numpy.zeros(1))],
    )
    broken = clean.model_copy(
        update={"weight_grads": [clean.weight_grads[0], Matrix(data=[[numpy.nan, 0.0]])]}
    )

    with pytest.raises(NumericalFailureError, match="regularizer gradient in layer 2"):
        finite_difference(clean, broken, 0.05)

    with pytest.raises(NumericalFailureError, match="parameter update in layer 2"):
        descend(
            [Matrix(data=numpy.zeros((2, 2))), Matrix(data=numpy.zeros((1, 2)))],
            [Vector(data=numpy.zeros(2)), Vector(data=numpy.zeros(1))],
            broken,
            0.1,
        )
