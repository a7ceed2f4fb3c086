"""Minimal feed-forward approximator with reverse-mode gradients.

Layer kinds: dense, 1-D convolution (stride 1, no padding), 1-D max-pool
(stride = kernel width), inverted dropout, and elementwise activations
(relu / tanh / linear). A network is a shared trunk followed by one or more
dense output heads. Everything runs in float64; inputs may be a single
vector (d,) or a batch (B, d), and all layer math is batched through BLAS
(convolutions via im2col + GEMM).

Typical usage::

    spec = NetworkSpec(input_dim=80, layers=(...), heads=(("q0", 1), ("q", 8)))
    net = Network(spec, rng=rng)
    outs = net.forward(x)                  # {"q0": (1,), "q": (8,)}
    grads, dx = net.backward({"q0": g0, "q": gq})

`backward` consumes the activations cached by the immediately preceding
`forward` call on the same network.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError

LAYER_KINDS = ("dense", "conv1d", "maxpool1d", "dropout", "activation")
ACTIVATIONS = ("relu", "tanh", "linear")


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    units: int = 0            # dense width / conv output channels
    kernel_width: int = 0     # conv1d and maxpool1d
    drop_prob: float = 0.0    # dropout
    activation: str = "linear"  # activation layers

    def validate(self) -> None:
        if self.kind not in LAYER_KINDS:
            raise ConfigError(f"unknown layer kind {self.kind!r}")
        if self.kind in ("dense", "conv1d") and self.units < 1:
            raise ConfigError(f"{self.kind} needs units >= 1, got {self.units}")
        if self.kind in ("conv1d", "maxpool1d") and self.kernel_width < 1:
            raise ConfigError(f"{self.kind} needs kernel_width >= 1")
        if self.kind == "dropout" and not 0.0 <= self.drop_prob <= 1.0:
            raise ConfigError(f"drop_prob must be in [0,1], got {self.drop_prob}")
        if self.kind == "activation" and self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}")


def dense(units: int) -> LayerSpec:
    return LayerSpec(kind="dense", units=units)


def conv1d(channels: int, kernel_width: int) -> LayerSpec:
    return LayerSpec(kind="conv1d", units=channels, kernel_width=kernel_width)


def maxpool1d(kernel_width: int) -> LayerSpec:
    return LayerSpec(kind="maxpool1d", kernel_width=kernel_width)


def dropout(p: float) -> LayerSpec:
    return LayerSpec(kind="dropout", drop_prob=p)


def activation(name: str) -> LayerSpec:
    return LayerSpec(kind="activation", activation=name)


@dataclass(frozen=True)
class NetworkSpec:
    input_dim: int
    layers: tuple = ()
    heads: tuple = ()   # ((name, output_dim) | (name, output_dim, activation), ...)

    def validate(self) -> None:
        if self.input_dim < 1:
            raise ConfigError("input_dim must be >= 1")
        if not self.heads:
            raise ConfigError("a network needs at least one head")
        for head in self.heads:
            if len(head) not in (2, 3):
                raise ConfigError(f"bad head spec {head!r}")
            if head[1] < 1:
                raise ConfigError(f"head {head[0]!r} needs output_dim >= 1")
            if head_activation(head) not in ACTIVATIONS:
                raise ConfigError(f"unknown head activation in {head!r}")
        for layer in self.layers:
            layer.validate()
        self.shapes()  # raises if any layer underflows

    def shapes(self) -> list:
        """Per-layer output shapes: (d,) for flat, (channels, length) after conv/pool."""
        shape = (self.input_dim,)
        out = []
        for layer in self.layers:
            shape = layer_output_shape(shape, layer)
            out.append(shape)
        return out

    def trunk_dim(self) -> int:
        """Flattened dimensionality feeding the heads."""
        shapes = self.shapes()
        last = shapes[-1] if shapes else (self.input_dim,)
        return int(np.prod(last))


def head_activation(head) -> str:
    return head[2] if len(head) > 2 else "linear"


def layer_output_shape(shape: tuple, layer: LayerSpec) -> tuple:
    layer.validate()
    if layer.kind == "dense":
        return (layer.units,)
    if layer.kind in ("dropout", "activation"):
        return shape
    # conv1d / maxpool1d interpret flat input as a single channel
    c, length = (1, shape[0]) if len(shape) == 1 else shape
    if layer.kind == "conv1d":
        out_len = length - layer.kernel_width + 1
        if out_len < 1:
            raise ConfigError(
                f"conv1d kernel {layer.kernel_width} exceeds input length {length}")
        return (layer.units, out_len)
    out_len = (length - layer.kernel_width) // layer.kernel_width + 1
    if out_len < 1:
        raise ConfigError(
            f"maxpool1d kernel {layer.kernel_width} exceeds input length {length}")
    return (c, out_len)


@dataclass
class NetworkParams:
    """Per-layer and per-head weight/bias arrays; mode gates dropout."""
    layers: list = field(default_factory=list)   # list[dict[str, ndarray]]
    heads: list = field(default_factory=list)
    mode: str = "train"                          # "train" | "eval"


def init_params(spec: NetworkSpec, rng: np.random.Generator,
                mode: str = "train") -> NetworkParams:
    """Uniform fan-in init (+-sqrt(1/fan_in)) for weights, zero biases."""
    spec.validate()
    layers = []
    shape = (spec.input_dim,)
    for layer in spec.layers:
        entry = {}
        if layer.kind == "dense":
            fan_in = int(np.prod(shape))
            bound = (1.0 / fan_in) ** 0.5
            entry["W"] = rng.uniform(-bound, bound, size=(layer.units, fan_in))
            entry["b"] = np.zeros(layer.units)
        elif layer.kind == "conv1d":
            c_in = 1 if len(shape) == 1 else shape[0]
            fan_in = c_in * layer.kernel_width
            bound = (1.0 / fan_in) ** 0.5
            entry["W"] = rng.uniform(-bound, bound,
                                     size=(layer.units, c_in, layer.kernel_width))
            entry["b"] = np.zeros(layer.units)
        layers.append(entry)
        shape = layer_output_shape(shape, layer)
    trunk = int(np.prod(shape))
    heads = []
    for head in spec.heads:
        dim = head[1]
        bound = (1.0 / trunk) ** 0.5
        heads.append({"W": rng.uniform(-bound, bound, size=(dim, trunk)),
                      "b": np.zeros(dim)})
    return NetworkParams(layers=layers, heads=heads, mode=mode)


def param_arrays(params: NetworkParams):
    """All weight arrays in a fixed deterministic order."""
    for entry in params.layers:
        for key in sorted(entry):
            yield entry[key]
    for entry in params.heads:
        for key in sorted(entry):
            yield entry[key]


def zeros_like_params(params: NetworkParams) -> NetworkParams:
    return NetworkParams(
        layers=[{k: np.zeros_like(v) for k, v in e.items()} for e in params.layers],
        heads=[{k: np.zeros_like(v) for k, v in e.items()} for e in params.heads],
        mode=params.mode)


def copy_params(params: NetworkParams) -> NetworkParams:
    return NetworkParams(
        layers=[{k: v.copy() for k, v in e.items()} for e in params.layers],
        heads=[{k: v.copy() for k, v in e.items()} for e in params.heads],
        mode=params.mode)


def flatten_params(params: NetworkParams) -> np.ndarray:
    arrs = list(param_arrays(params))
    if not arrs:
        return np.zeros(0)
    return np.concatenate([a.ravel() for a in arrs])


def assign_flat(params: NetworkParams, vec: np.ndarray) -> None:
    """Write a flat vector back into the parameter arrays (FD checks)."""
    off = 0
    for a in param_arrays(params):
        a[...] = vec[off:off + a.size].reshape(a.shape)
        off += a.size
    if off != vec.size:
        raise ConfigError(f"flat vector length {vec.size} != parameter count {off}")


class Network:
    """A spec plus parameters, with a forward/backward tape."""

    def __init__(self, spec: NetworkSpec, params: Optional[NetworkParams] = None,
                 rng: Optional[np.random.Generator] = None):
        spec.validate()
        self.spec = spec
        if params is None:
            if rng is None:
                raise ConfigError("Network needs either params or an init rng")
            params = init_params(spec, rng)
        self._check_shapes(params)
        self.params = params
        self._tape = None

    def _check_shapes(self, params: NetworkParams) -> None:
        ref = init_params(self.spec, np.random.default_rng(0))
        if len(params.layers) != len(ref.layers) or len(params.heads) != len(ref.heads):
            raise ConfigError("parameter structure does not match spec")
        for got, want in zip(params.layers + params.heads, ref.layers + ref.heads):
            if sorted(got) != sorted(want):
                raise ConfigError("parameter keys do not match spec")
            for k in want:
                if got[k].shape != want[k].shape:
                    raise ConfigError(
                        f"parameter {k} has shape {got[k].shape}, expected {want[k].shape}")

    @property
    def mode(self) -> str:
        return self.params.mode

    @mode.setter
    def mode(self, value: str) -> None:
        if value not in ("train", "eval"):
            raise ConfigError(f"mode must be 'train' or 'eval', got {value!r}")
        self.params.mode = value

    def forward(self, x, rng: Optional[np.random.Generator] = None) -> dict:
        """Run the trunk and every head; caches activations for backward.

        Accepts (input_dim,) or (batch, input_dim); head outputs follow suit.
        """
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.spec.input_dim:
            raise ConfigError(
                f"input has shape {x.shape}, expected (*, {self.spec.input_dim})")
        train = self.params.mode == "train"
        tape = []
        cur = x
        for layer, entry in zip(self.spec.layers, self.params.layers):
            cur, cache = _layer_forward(layer, entry, cur, train, rng)
            tape.append(cache)
        flat = cur.reshape(cur.shape[0], -1)
        outs = {}
        head_caches = {}
        for head, entry in zip(self.spec.heads, self.params.heads):
            name = head[0]
            y = flat @ entry["W"].T + entry["b"]
            act = head_activation(head)
            if act == "relu":
                head_caches[name] = {"pre": y}
                y = np.maximum(y, 0.0)
            elif act == "tanh":
                y = np.tanh(y)
                head_caches[name] = {"y": y}
            outs[name] = y[0] if single else y
        self._tape = {"x": x, "layers": tape, "flat": flat, "single": single,
                      "heads": head_caches}
        return outs

    def backward(self, head_grads: dict):
        """Gradients of sum_h <head_grads[h], head_h> w.r.t. params and input.

        Returns (grads, input_grad) where grads mirrors NetworkParams.
        Heads absent from head_grads contribute zero.
        """
        if self._tape is None:
            raise RuntimeError("backward called without a paired forward pass")
        tape = self._tape
        flat = tape["flat"]
        batch = flat.shape[0]
        names = [head[0] for head in self.spec.heads]
        for key in head_grads:
            if key not in names:
                raise ConfigError(f"unknown head {key!r} in head_grads")
        grads = zeros_like_params(self.params)
        g_flat = np.zeros_like(flat)
        for i, head in enumerate(self.spec.heads):
            name, dim = head[0], head[1]
            if name not in head_grads:
                continue
            g = np.asarray(head_grads[name], dtype=float)
            if tape["single"]:
                g = g[None, :]
            if g.shape != (batch, dim):
                raise ConfigError(
                    f"grad for head {name!r} has shape {g.shape}, expected {(batch, dim)}")
            act = head_activation(head)
            if act == "relu":
                g = g * (tape["heads"][name]["pre"] > 0.0)
            elif act == "tanh":
                y = tape["heads"][name]["y"]
                g = g * (1.0 - y * y)
            entry = self.params.heads[i]
            grads.heads[i]["W"] = g.T @ flat
            grads.heads[i]["b"] = g.sum(axis=0)
            g_flat += g @ entry["W"]
        cur = g_flat
        for idx in range(len(self.spec.layers) - 1, -1, -1):
            layer = self.spec.layers[idx]
            cache = tape["layers"][idx]
            cur, layer_grads = _layer_backward(layer, self.params.layers[idx],
                                               cur, cache)
            grads.layers[idx] = layer_grads
        dx = cur.reshape(tape["x"].shape)
        if tape["single"]:
            dx = dx[0]
        return grads, dx


def _layer_forward(layer, entry, x, train, rng):
    if layer.kind == "dense":
        x2 = x.reshape(x.shape[0], -1)
        y = x2 @ entry["W"].T + entry["b"]
        return y, {"x2": x2, "shape": x.shape}
    if layer.kind == "activation":
        if layer.activation == "relu":
            return np.maximum(x, 0.0), {"pre": x}
        if layer.activation == "tanh":
            y = np.tanh(x)
            return y, {"y": y}
        return x, {}
    if layer.kind == "dropout":
        if not train or layer.drop_prob == 0.0:
            return x, {"mask": None}
        if layer.drop_prob >= 1.0:
            return np.zeros_like(x), {"mask": np.zeros_like(x)}
        if rng is None:
            raise ConfigError("train-mode dropout needs an rng")
        keep = 1.0 - layer.drop_prob
        mask = (rng.random(x.shape) >= layer.drop_prob) / keep
        return x * mask, {"mask": mask}
    x3 = x if x.ndim == 3 else x.reshape(x.shape[0], 1, -1)
    if layer.kind == "conv1d":
        b, c_in, length = x3.shape
        w = layer.kernel_width
        out_len = length - w + 1
        cols = np.lib.stride_tricks.sliding_window_view(x3, w, axis=2)
        cols = np.ascontiguousarray(cols.transpose(0, 2, 1, 3)
                                    ).reshape(b * out_len, c_in * w)
        wmat = entry["W"].reshape(layer.units, c_in * w)
        y = (cols @ wmat.T + entry["b"]).reshape(b, out_len, layer.units)
        y = np.ascontiguousarray(y.transpose(0, 2, 1))
        return y, {"cols": cols, "in_shape": x.shape, "x3_shape": x3.shape}
    # maxpool1d, stride == kernel width
    b, c, length = x3.shape
    w = layer.kernel_width
    n_out = (length - w) // w + 1
    win = x3[:, :, :n_out * w].reshape(b, c, n_out, w)
    idx = win.argmax(axis=3)
    y = np.take_along_axis(win, idx[..., None], axis=3)[..., 0]
    return y, {"idx": idx, "in_shape": x.shape, "x3_shape": x3.shape}


def _layer_backward(layer, entry, g, cache):
    if layer.kind == "dense":
        x2 = cache["x2"]
        dW = g.T @ x2
        db = g.sum(axis=0)
        dx = (g @ entry["W"]).reshape(cache["shape"])
        return dx, {"W": dW, "b": db}
    if layer.kind == "activation":
        if layer.activation == "relu":
            return g * (cache["pre"] > 0.0), {}
        if layer.activation == "tanh":
            y = cache["y"]
            return g * (1.0 - y * y), {}
        return g, {}
    if layer.kind == "dropout":
        mask = cache["mask"]
        return (g if mask is None else g * mask), {}
    if layer.kind == "conv1d":
        b, c_in, length = cache["x3_shape"]
        w = layer.kernel_width
        out_len = length - w + 1
        gmat = np.ascontiguousarray(g.transpose(0, 2, 1)).reshape(b * out_len,
                                                                  layer.units)
        cols = cache["cols"]
        dW = (gmat.T @ cols).reshape(layer.units, c_in, w)
        db = gmat.sum(axis=0)
        dcols = (gmat @ entry["W"].reshape(layer.units, c_in * w))
        dcols = dcols.reshape(b, out_len, c_in, w)
        dx3 = np.zeros((b, c_in, length))
        for t in range(w):
            dx3[:, :, t:t + out_len] += dcols[:, :, :, t].transpose(0, 2, 1)
        return dx3.reshape(cache["in_shape"]), {"W": dW, "b": db}
    # maxpool1d
    b, c, length = cache["x3_shape"]
    w = layer.kernel_width
    idx = cache["idx"]
    n_out = idx.shape[2]
    scatter = np.zeros((b, c, n_out, w))
    np.put_along_axis(scatter, idx[..., None], g[..., None], axis=3)
    dx3 = np.zeros((b, c, length))
    dx3[:, :, :n_out * w] = scatter.reshape(b, c, n_out * w)
    return dx3.reshape(cache["in_shape"]), {}
