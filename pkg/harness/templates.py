from core.errors import ConfigError

_EXPERIMENT = """\
# Experiment file grammar (INI):
#   [experiment]      name, runs, seed, output_dir, iterations, stride, group_by,
#                     record_feasibility
#   [problem]         family, n, m, batch, p, seed and family knobs
#   [solver.<name>]   algorithm (SPP, A-SPP, SGD, RSPP), mu0, gamma,
#                     iterations, epochs, stride
#   [bounds]          overlay, kappa, samples, noise_scaled
# mu0 and gamma take comma-separated lists that expand into a grid;
# gamma = 0 selects a constant stepsize. Unknown keys are errors.
# iterations defaults to one pass through the data (the component count).

[experiment]
name = {name}
runs = 30
seed = 0
output_dir = results/{name}
group_by = {group_by}
"""

_PROBLEMS = {
    "constrained-ls": """\
[problem]
family = constrained-ls
n = 20
m = 2000
seed = 7
# spectrum = harmonic | flat, noise = std of b_i | a_i, active = equality count at x*
spectrum = harmonic
noise = 1.0
active = 3
coupling = independent
""",
    "random-ls-polyhedron": """\
[problem]
family = random-ls-polyhedron
n = 20
m = 1000
# p = number of random halfspaces (0 = unconstrained)
p = 1000
seed = 7
""",
    "markowitz": """\
[problem]
family = markowitz
# synthetic returns with m periods and n assets unless csv is set
n = 25
m = 1276
seed = 7
# csv = data/sp500.csv
b_policy = mean
train_fraction = 0.9
""",
    "feasibility": """\
[problem]
family = feasibility
n = 20
m = 200
lam = 1.0
contains_origin = false
seed = 7
""",
    "finite-sum": """\
[problem]
family = finite-sum
n = 10
m = 500
# loss = logistic | squared
loss = logistic
ridge = 1.0
seed = 7
""",
}

_SOLVERS_ALL = """\
[solver.spp]
algorithm = SPP
mu0 = 0.5, 1
gamma = {gammas}

[solver.aspp]
algorithm = A-SPP
mu0 = 0.5, 1
gamma = {gammas}

[solver.rspp]
algorithm = RSPP
mu0 = 0.5, 1
gamma = {gammas}

[solver.sgd]
algorithm = SGD
mu0 = 0.5, 1
gamma = {gammas}
"""

_SOLVERS_EXPONENTS = """\
[solver.spp]
algorithm = SPP
mu0 = 1
gamma = 1, 0.75, 0.5, 0.25

[solver.rspp]
algorithm = RSPP
mu0 = 1
gamma = 1, 1.3333333333333333, 1.5, 2
"""

_BOUNDS = """
[bounds]
overlay = {overlay}
samples = 200
noise_scaled = true
"""

GROUPS = {
    "algorithms": ("constrained-ls", "gamma", _SOLVERS_ALL.format(gammas="0.5, 1"), "true"),
    "decay-rates": ("random-ls-polyhedron", "algorithm", _SOLVERS_EXPONENTS, "false"),
    "portfolio": ("markowitz", "gamma", _SOLVERS_ALL.format(gammas="0.5, 1"), "false"),
}

TEMPLATES = tuple(_PROBLEMS) + tuple(GROUPS)


def gen_config(family: str) -> str:
    """
    A documented experiment template for a problem family, or for one of the
    comparison groups: algorithms (four algorithms over mu0 and gamma, one
    figure per gamma), decay-rates (SPP and RSPP over gamma) and portfolio
    (Markowitz).
    """
    if family in GROUPS:
        problem, group_by, solvers, overlay = GROUPS[family]
        name = family
    elif family in _PROBLEMS:
        problem, group_by, overlay = family, "none", "true"
        solvers = "[solver.spp]\nalgorithm = SPP\nmu0 = 1\ngamma = 1\n"
        name = family
    else:
        raise ConfigError(f"unknown template {family!r}; expected one of {', '.join(TEMPLATES)}")
    return "\n".join([
        _EXPERIMENT.format(name=name, group_by=group_by),
        _PROBLEMS[problem],
        solvers,
    ]) + _BOUNDS.format(overlay=overlay)
