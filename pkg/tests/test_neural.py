import numpy as np
import pytest

from v2nscale.neural import (Adam, Lstm, LstmSpec, Mlp, MlpSpec, elu, elu_grad,
                             finite_difference_grads, gradient_check, load_json,
                             max_relative_error, net_from_dict, net_to_dict,
                             save_json, softmax)


def rng_():
    return np.random.default_rng(123)


def zeroed(net):
    net.set_params([np.zeros_like(p) for p in net.params])
    return net


# --- MLP forward ---------------------------------------------------------

def test_zero_weights_identity_head_gives_zero_output():
    net = zeroed(Mlp(MlpSpec(3, 2, (4,)), rng_()))
    y, _ = net.forward(np.ones((5, 3)))
    np.testing.assert_array_equal(y, np.zeros((5, 2)))


def test_softmax_rows_sum_to_one():
    net = Mlp(MlpSpec(2, 7, (8, 8), output_activation="softmax"), rng_())
    y, _ = net.forward(rng_().normal(size=(13, 2), scale=3.0))
    np.testing.assert_allclose(y.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(y >= 0)


def test_tanh_outputs_strictly_inside_unit_interval():
    net = Mlp(MlpSpec(2, 3, (8,), output_activation="tanh"), rng_())
    y, _ = net.forward(rng_().normal(size=(9, 2), scale=5.0))
    assert np.all(np.abs(y) < 1.0)


def test_single_layer_hand_forward():
    # y = x @ W + b with W = [[1], [2]], b = [0.5] on x = (1, 2): 1 + 4 + 0.5
    net = Mlp(MlpSpec(2, 1, (3,)), rng_())
    net.set_params([np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),  # passthrough-ish
                    np.zeros(3),
                    np.array([[1.0], [2.0], [0.0]]),
                    np.array([0.5])])
    y, _ = net.forward(np.array([[1.0, 2.0]]))
    # hidden: elu([1, 2, 0]) = [1, 2, 0]; head: 1*1 + 2*2 + 0 + 0.5
    assert y[0, 0] == pytest.approx(5.5)


def test_forward_shape_validation():
    net = Mlp(MlpSpec(2, 1, (4,)), rng_())
    with pytest.raises(ValueError):
        net.forward(np.ones((3, 5)))
    with pytest.raises(ValueError):
        net.forward(np.ones(2))


def test_forward_is_pure():
    net = Mlp(MlpSpec(2, 2, (8, 8), output_activation="softmax"), rng_())
    x = rng_().normal(size=(6, 2))
    a, _ = net.forward(x)
    b, _ = net.forward(x)
    np.testing.assert_array_equal(a, b)


def test_param_count_closed_form():
    spec = MlpSpec(2, 1, (128, 128, 128))
    sizes = (2, 128, 128, 128, 1)
    expected = sum(a * b + b for a, b in zip(sizes, sizes[1:]))
    assert spec.param_count == expected == 33537
    net = Mlp(spec, rng_())
    assert sum(p.size for p in net.params) == expected
    assert net.param_vector.size == expected


def test_elu_continuity_and_negative_branch():
    z = np.linspace(-4, -0.01, 50)
    np.testing.assert_allclose(elu_grad(z), np.exp(z), rtol=1e-12)
    assert elu(np.array([0.0]))[0] == 0.0
    eps = 1e-9
    assert elu(np.array([eps]))[0] == pytest.approx(elu(np.array([-eps]))[0], abs=1e-8)
    assert elu_grad(np.array([1e-12]))[0] == pytest.approx(1.0, abs=1e-9)


# --- MLP backward vs finite differences ----------------------------------

def test_zero_output_grad_gives_zero_grads():
    net = Mlp(MlpSpec(2, 2, (5,)), rng_())
    x = rng_().normal(size=(4, 2))
    y, cache = net.forward(x)
    grads, gin = net.backward(cache, np.zeros_like(y))
    for g in grads:
        np.testing.assert_array_equal(g, 0.0)
    np.testing.assert_array_equal(gin, 0.0)


@pytest.mark.parametrize("head,out_dim", [("identity", 1), ("tanh", 2), ("softmax", 5)])
def test_mlp_gradcheck_each_head(head, out_dim):
    rng = np.random.default_rng(hash(head) % 2**32)
    net = Mlp(MlpSpec(3, out_dim, (9, 7), output_activation=head), rng)
    x = rng.normal(size=(6, 3))
    target = rng.normal(size=(6, out_dim))
    assert gradient_check(net, x, target) < 1e-4


def test_mlp_gradcheck_random_small_shapes():
    rng = np.random.default_rng(99)
    for _ in range(5):
        hidden = tuple(int(h) for h in rng.integers(1, 16, size=rng.integers(1, 4)))
        spec = MlpSpec(int(rng.integers(1, 8)), int(rng.integers(1, 8)), hidden)
        net = Mlp(spec, rng)
        x = rng.normal(size=(3, spec.input_dim))
        target = rng.normal(size=(3, spec.output_dim))
        assert gradient_check(net, x, target) < 1e-4


def test_mlp_input_gradient_matches_finite_differences():
    rng = np.random.default_rng(4)
    net = Mlp(MlpSpec(3, 2, (8,), output_activation="tanh"), rng)
    x = rng.normal(size=(2, 3))
    target = rng.normal(size=(2, 2))
    y, cache = net.forward(x)
    gout = 2.0 * (y - target) / y.size
    _, analytic = net.backward(cache, gout)
    np.testing.assert_allclose(analytic, net.input_gradient(cache, gout), atol=1e-14)

    numeric = np.zeros_like(x)
    h = 1e-6
    for i in range(x.size):
        for sign in (1.0, -1.0):
            bumped = x.copy()
            bumped.ravel()[i] += sign * h
            out, _ = net.forward(bumped)
            numeric.ravel()[i] += sign * float(((out - target) ** 2).mean())
    numeric /= 2 * h
    assert max_relative_error([analytic], [numeric]) < 1e-4


def test_backward_rejects_foreign_cache():
    net_a = Mlp(MlpSpec(2, 1, (4,)), rng_())
    net_b = Mlp(MlpSpec(2, 1, (4,)), rng_())
    y, cache = net_a.forward(np.ones((1, 2)))
    with pytest.raises(ValueError):
        net_b.backward(cache, np.ones_like(y))


def test_backward_rejects_wrong_grad_shape():
    net = Mlp(MlpSpec(2, 1, (4,)), rng_())
    _, cache = net.forward(np.ones((3, 2)))
    with pytest.raises(ValueError):
        net.backward(cache, np.ones((2, 1)))


def test_flatten_grads_alignment():
    net = Mlp(MlpSpec(2, 1, (4,)), rng_())
    x = rng_().normal(size=(3, 2))
    y, cache = net.forward(x)
    grads, _ = net.backward(cache, np.ones_like(y))
    flat = net.flatten_grads(grads)
    offset = 0
    for g in grads:
        np.testing.assert_array_equal(flat[offset:offset + g.size], g.ravel())
        offset += g.size


# --- linear net + quadratic loss: finite differences nearly exact --------

def test_gradcheck_linear_quadratic_is_tight():
    rng = np.random.default_rng(11)
    net = Mlp(MlpSpec(3, 2, (4,)), rng)
    # zero the hidden pre-activation negatives away: use positive inputs and
    # positive first-layer weights so the ELU stays in its linear branch
    params = net.params
    params[0] = np.abs(params[0])
    net.set_params(params)
    x = np.abs(rng.normal(size=(4, 3))) + 0.1
    target = rng.normal(size=(4, 2))
    assert gradient_check(net, x, target) < 1e-8


# --- Adam ------------------------------------------------------------------

def test_adam_zero_gradient_keeps_params():
    net = Mlp(MlpSpec(2, 1, (4,)), rng_())
    before = [p.copy() for p in net.params]
    opt = Adam(lr=0.1)
    opt.step(net.params, [np.zeros_like(p) for p in net.params])
    for a, b in zip(net.params, before):
        np.testing.assert_array_equal(a, b)


def test_adam_first_step_closed_form():
    # with fresh state, one step moves each weight by -lr * g / (|g| + eps)
    params = [np.array([1.0, -2.0, 3.0])]
    g = np.array([0.5, -1.5, 2.0])
    opt = Adam(lr=0.01)
    opt.step(params, [g.copy()])
    expected = np.array([1.0, -2.0, 3.0]) - 0.01 * g / (np.abs(g) + opt.epsilon)
    np.testing.assert_allclose(params[0], expected, rtol=1e-12)
    assert opt.step_count == 1


def test_adam_deterministic_twin_runs():
    rng = np.random.default_rng(0)
    grads = [rng.normal(size=(3, 2)) for _ in range(20)]
    runs = []
    for _ in range(2):
        p = [np.ones((3, 2))]
        opt = Adam(lr=0.05)
        for g in grads:
            opt.step(p, [g])
        runs.append(p[0].copy())
    np.testing.assert_array_equal(runs[0], runs[1])


def test_adam_shape_mismatch_raises():
    opt = Adam()
    p = [np.ones(3)]
    opt.step(p, [np.ones(3)])
    with pytest.raises(ValueError):
        opt.step(p, [np.ones(4)])


# --- LSTM -----------------------------------------------------------------

def test_lstm_zero_params_outputs_head_bias():
    net = zeroed(Lstm(LstmSpec(1, 2, 4, 1), rng_()))
    params = net.params
    params[-1] = np.array([0.75])
    net.set_params(params)
    y, _ = net.forward(np.ones((3, 5, 1)))
    np.testing.assert_allclose(y, 0.75)


def test_lstm_single_cell_hand_trace():
    def sigmoid(v):
        return 1.0 / (1.0 + np.exp(-v))

    net = Lstm(LstmSpec(1, 1, 1, 1), rng_())
    w_in = np.array([[0.3, -0.2, 0.5, 0.4]])
    w_rec = np.array([[0.1, 0.2, -0.1, 0.3]])
    bias = np.array([0.05, -0.05, 0.1, 0.0])
    w_head = np.array([[2.0]])
    b_head = np.array([0.25])
    net.set_params([w_in, w_rec, bias, w_head, b_head])
    x = 0.7
    gate_i = sigmoid(0.3 * x + 0.05)
    gate_f = sigmoid(-0.2 * x - 0.05)
    gate_g = np.tanh(0.5 * x + 0.1)
    gate_o = sigmoid(0.4 * x + 0.0)
    c = gate_i * gate_g
    h = gate_o * np.tanh(c)
    expected = 2.0 * h + 0.25
    y, _ = net.forward(np.array([[[x]]]))
    assert y[0, 0] == pytest.approx(expected, rel=1e-12)


def test_lstm_gradcheck_paper_shape():
    rng = np.random.default_rng(21)
    net = Lstm(LstmSpec(1, 2, 4, 1), rng)
    x = rng.normal(size=(3, 4, 1))
    target = rng.normal(size=(3, 1))
    assert gradient_check(net, x, target) < 1e-4


def test_lstm_gradcheck_random_shapes():
    rng = np.random.default_rng(22)
    for _ in range(3):
        spec = LstmSpec(int(rng.integers(1, 3)), int(rng.integers(1, 3)),
                        int(rng.integers(1, 6)), int(rng.integers(1, 3)))
        net = Lstm(spec, rng)
        x = rng.normal(size=(2, int(rng.integers(1, 5)), spec.input_dim))
        target = rng.normal(size=(2, spec.output_dim))
        assert gradient_check(net, x, target) < 1e-4


def test_lstm_shape_validation():
    net = Lstm(LstmSpec(2, 1, 3, 1), rng_())
    with pytest.raises(ValueError):
        net.forward(np.ones((2, 4, 3)))
    with pytest.raises(ValueError):
        net.forward(np.ones((2, 3)))


def test_lstm_param_count_formula():
    spec = LstmSpec(1, 2, 4, 1)
    net = Lstm(spec, rng_())
    assert sum(p.size for p in net.params) == spec.param_count


# --- finite-difference helper itself --------------------------------------

def test_finite_difference_on_explicit_quadratic():
    p = [np.array([2.0, -3.0])]

    def loss():
        return float((p[0] ** 2).sum())

    numeric = finite_difference_grads(loss, p)
    np.testing.assert_allclose(numeric[0], 2.0 * p[0], rtol=1e-8)
    np.testing.assert_array_equal(p[0], [2.0, -3.0])  # restored


# --- checkpoints -----------------------------------------------------------

@pytest.mark.parametrize("make", [
    lambda r: Mlp(MlpSpec(2, 3, (5, 4), output_activation="softmax"), r),
    lambda r: Lstm(LstmSpec(1, 2, 4, 1), r),
])
def test_net_checkpoint_round_trip_bit_exact(tmp_path, make):
    net = make(np.random.default_rng(8))
    path = tmp_path / "net.json"
    save_json(net_to_dict(net), path)
    restored = net_from_dict(load_json(path))
    for a, b in zip(net.params, restored.params):
        np.testing.assert_array_equal(a, b)
    x = (np.random.default_rng(1).normal(size=(2, 2)) if isinstance(net, Mlp)
         else np.random.default_rng(1).normal(size=(2, 3, 1)))
    ya, _ = net.forward(x)
    yb, _ = restored.forward(x)
    np.testing.assert_array_equal(ya, yb)
