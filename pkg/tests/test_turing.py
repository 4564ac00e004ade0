import random

import pytest

from defectca.errors import DefectcaError, InvalidMachineError
from defectca.lattice import power_decode_config, power_encode_config
from defectca.rules import from_wolfram_number, identity_rule
from defectca.shifts import (
    Alphabet,
    BlockCoder,
    binary_alphabet,
    build_markov_shift,
    full_shift,
)
from defectca.turing import (
    APDA,
    ClassicalTM,
    LRTuringMachine,
    MachineState,
    apda_to_lr,
    build_cycle_encoder,
    ca_to_turing,
    classical_to_lr,
    detect_runaway_cycle,
    left_tape,
    regime_of,
    right_tape,
    run_apda,
    runaway_cycles,
    step_lrtm,
    turing_to_ca,
)
from defectca import zoo

A2 = binary_alphabet()


def zero_shift():
    return build_markov_shift(A2, [(0, 0)])


def one_shift():
    return build_markov_shift(A2, [(1, 1)])


class TestHalfTape:
    def test_left_reads(self):
        t = left_tape((0, 1), near=(1, 0, 0))
        assert t.read_out(5) == (0, 0, 1, 1, 0)

    def test_right_reads(self):
        t = right_tape((0, 1), near=(1, 1))
        assert t.read_out(5) == (1, 1, 0, 1, 0)

    def test_push_pop_round_trip(self):
        t = left_tape((0,), near=(1,))
        assert t.push(0).pop().read_out(3) == t.read_out(3)

    def test_pop_consumes_background(self):
        t = right_tape((0, 1), near=())
        popped = t.pop()
        assert popped.read_out(4) == t.read_out(5)[1:]


def _stationary_machine():
    heads = ("a", "b")
    return LRTuringMachine(
        A2, heads, zero_shift(), one_shift(),
        tau_L=lambda l2, l1, d: l1,
        tau_C=lambda l1, d, r1: l1,
        tau_R=lambda d, r1, r2: r1,
        upsilon=lambda l2, l1, d, r1, r2: "b" if d == "a" else "a",
        velocity=lambda l1, d, r1: 0,
        name="flip")


class TestStepLRTM:
    def test_stationary_flips_head_only(self):
        m = _stationary_machine()
        s0 = MachineState(left_tape((0,)), "a", right_tape((1,)), 0)
        s1 = step_lrtm(m, s0)
        assert s1.head == "b" and s1.z == 0
        assert s1.left.read_out(4) == s0.left.read_out(4)
        assert s1.right.read_out(4) == s0.right.read_out(4)

    def test_hand_traced_two_steps(self):
        # state a waits one step, then b marches right consuming the sea,
        # leaving zeros behind
        full = full_shift(A2)
        m = LRTuringMachine(
            A2, ("a", "b"), zero_shift(), full,
            tau_L=lambda l2, l1, d: l1,
            tau_C=lambda l1, d, r1: 0,
            tau_R=lambda d, r1, r2: r1,
            upsilon=lambda l2, l1, d, r1, r2: "b",
            velocity=lambda l1, d, r1: 0 if d == "a" else 1)
        s = MachineState(left_tape((0,)), "a", right_tape((1, 0), near=(1, 1)), 0)
        s = step_lrtm(m, s)
        assert (s.head, s.z) == ("b", 0)
        s = step_lrtm(m, s)
        assert (s.head, s.z) == ("b", 1)
        assert s.left.read_out(2) == (0, 0)
        assert s.right.read(1) == 1  # the second sea cell is now adjacent

    def test_inadmissible_write_raises(self):
        m = LRTuringMachine(
            A2, ("a",), zero_shift(), one_shift(),
            tau_L=lambda l2, l1, d: 1,  # writes a 1 into the zero background
            tau_C=lambda l1, d, r1: 0,
            tau_R=lambda d, r1, r2: r1,
            upsilon=lambda l2, l1, d, r1, r2: "a",
            velocity=lambda l1, d, r1: 0)
        s = MachineState(left_tape((0,)), "a", right_tape((1,)), 0)
        with pytest.raises(InvalidMachineError):
            step_lrtm(m, s)


class TestCaToTuring:
    def beta_state(self, machine):
        return MachineState(left_tape((0,)), (0, 1), right_tape((1,)), 0)

    def test_beta_machine_is_stationary(self):
        machine, conj = ca_to_turing(from_wolfram_number(184), zero_shift(),
                                     one_shift(), 0)
        s = self.beta_state(machine)
        for _ in range(5):
            s2 = step_lrtm(machine, s)
            assert (s2.z, s2.head) == (s.z, s.head)
            assert s2.left.read_out(3) == s.left.read_out(3)
            s = s2

    def test_identity_rule_machine_fixes_everything(self):
        machine, _ = ca_to_turing(identity_rule(A2), zero_shift(), one_shift(), 0)
        s = self.beta_state(machine)
        s2 = step_lrtm(machine, s)
        assert (s2.z, s2.head) == (s.z, s.head)

    def test_non_fixed_background_rejected(self):
        gstar = build_markov_shift(A2, [(0, 1), (1, 0)])
        with pytest.raises(DefectcaError):
            ca_to_turing(from_wolfram_number(184), gstar, gstar, 0)

    def test_conjugacy_round_trip(self):
        machine, conj = ca_to_turing(from_wolfram_number(184), zero_shift(),
                                     one_shift(), 0)
        s = self.beta_state(machine)
        cfg = conj.encode(s)
        back = conj.decode(cfg)
        assert back.z == s.z and back.head == s.head
        assert back.left.read_out(5) == s.left.read_out(5)
        assert back.right.read_out(5) == s.right.read_out(5)


def _right_mover():
    # one head state marching right over a random sea, laying zeros
    full = full_shift(A2)
    return LRTuringMachine(
        A2, ("m",), zero_shift(), full,
        tau_L=lambda l2, l1, d: l1,
        tau_C=lambda l1, d, r1: 0,
        tau_R=lambda d, r1, r2: r1,
        upsilon=lambda l2, l1, d, r1, r2: "m",
        velocity=lambda l1, d, r1: 1,
        name="mover")


class TestTuringToCA:
    def test_stationary_machine_defect_never_moves(self):
        m = _stationary_machine()
        rule, emb = turing_to_ca(m)
        from defectca.lattice import apply_rule
        s = MachineState(left_tape((0,)), "a", right_tape((1,)), 0)
        cfg = emb.encode(s)
        for t in range(10):
            cfg = apply_rule(rule, cfg)
            assert emb.decode(cfg).z == 0

    def test_right_mover_bisimulation(self):
        m = _right_mover()
        rule, emb = turing_to_ca(m)
        from defectca.lattice import apply_rule
        s = MachineState(left_tape((0,)), "m",
                         right_tape((1, 1, 0), near=(0, 1, 1, 0, 1)), 0)
        cfg = emb.encode(s)
        for t in range(20):
            s = step_lrtm(m, s)
            cfg = apply_rule(rule, cfg)
            got = emb.decode(cfg)
            assert got.z == s.z == t + 1
            assert got.head == s.head
            assert got.left.read_out(6) == s.left.read_out(6)
            assert got.right.read_out(6) == s.right.read_out(6)

    def test_round_trip_extraction_bisimulates(self):
        m = _right_mover()
        rule, emb = turing_to_ca(m)
        ext = rule.alphabet
        L2 = build_markov_shift(ext, [(0, 0)])
        R2 = full_shift(ext, (0, 1))
        m2, conj = ca_to_turing(rule, L2, R2, 1)
        coder = BlockCoder(ext, conj.rule.alphabet, conj.W_hat, "power", 0)
        s = MachineState(left_tape((0,)), "m",
                         right_tape((1, 0), near=(0, 1, 1, 0)), 0)
        cfg = emb.encode(s)
        s2 = conj.decode(power_encode_config(coder, cfg))
        for t in range(30):
            s = step_lrtm(m, s)
            s2 = step_lrtm(m2, s2)
            decoded = emb.decode(power_decode_config(coder, conj.encode(s2)))
            assert decoded.z == s.z
            assert decoded.head == s.head
            assert decoded.left.read_out(4) == s.left.read_out(4)
            assert decoded.right.read_out(4) == s.right.read_out(4)


class TestCycleEncoder:
    def test_full_shift_blocks(self):
        enc = build_cycle_encoder(full_shift(A2))
        assert (enc.P, enc.w0, enc.w1) == (2, (0, 0), (0, 1))
        assert enc.encode((0, 1, 1)) == (0, 0, 0, 1, 0, 1)

    def test_golden_mean_blocks(self):
        gm = build_markov_shift(A2, [(0, 0), (0, 1), (1, 0)])
        enc = build_cycle_encoder(gm)
        assert (enc.P, enc.w0, enc.w1) == (2, (0, 0), (0, 1))
        assert gm.is_admissible(enc.encode((1, 0, 1)) * 2)

    def test_decode_rejects_non_image(self):
        enc = build_cycle_encoder(full_shift(A2))
        with pytest.raises(ValueError):
            enc.decode((1, 1))

    def test_zero_entropy_rejected(self):
        with pytest.raises(Exception):
            build_cycle_encoder(zero_shift())


class TestClassicalToLR:
    def test_constant_right_mover_advances_block_per_macro(self):
        tm = ClassicalTM(2, ("m",),
                         tau={(0, "m"): 1, (1, "m"): 1},
                         upsilon={(0, "m"): "m", (1, "m"): "m"},
                         velocity={(0, "m"): 1, (1, "m"): 1})
        comp = classical_to_lr(tm, full_shift(A2), full_shift(A2))
        C = comp.cells_per_symbol
        s = comp.initial_state({}, "m", 0, window=8)
        for k in range(1, 4):
            s, micro = comp.macro_step(s)
            assert micro == C
            assert s.z == k * C

    def test_binary_increment_against_classical_oracle(self):
        tm = zoo.binary_increment_tm()
        tape0 = {-3: 0, -2: 0, -1: 1, 0: 1}
        ctape, cd, cz = tm.run(dict(tape0), "start", 0, 6)
        assert [ctape.get(k, 0) for k in (-3, -2, -1, 0)] == [0, 1, 0, 0]
        assert cd == "halt"
        comp = classical_to_lr(tm, full_shift(A2), full_shift(A2))
        s = comp.initial_state(tape0, "start", 0, window=8)
        for _ in range(6):
            s, _ = comp.macro_step(s)
        tape, d, z = comp.decode_state(s, window=6)
        assert d == cd and z == cz
        for k in range(-6, 7):
            assert tape.get(k, 0) == ctape.get(k, 0)

    def test_never_moving_machine(self):
        tm = ClassicalTM(2, ("s",),
                         tau={(0, "s"): 1, (1, "s"): 0},
                         upsilon={(0, "s"): "s", (1, "s"): "s"},
                         velocity={(0, "s"): 0, (1, "s"): 0})
        comp = classical_to_lr(tm, full_shift(A2), full_shift(A2))
        s = comp.initial_state({0: 0}, "s", 0, window=4)
        for _ in range(5):
            s, micro = comp.macro_step(s)
            assert micro == 1 and s.z == 0

    def test_zero_entropy_side_rejected(self):
        tm = zoo.binary_increment_tm()
        with pytest.raises(DefectcaError):
            classical_to_lr(tm, zero_shift(), full_shift(A2))


class TestRegime:
    def test_trichotomy(self):
        full = full_shift(A2)
        zero = zero_shift()
        assert regime_of(full, full) == "turing-complete"
        assert regime_of(zero, full) == "apda"
        assert regime_of(full, zero) == "apda"
        gstar = build_markov_shift(A2, [(0, 1), (1, 0)])
        assert regime_of(gstar, gstar) == "ballistic"


def _random_apda(rng, n_states=3, n_syms=2):
    heads = tuple(f"q{i}" for i in range(n_states))
    ups, rule = {}, {}
    for t in range(n_syms):
        for d in heads:
            ups[(t, d)] = rng.choice(heads)
            act = rng.choice(["push", "pop", "noop"])
            rule[(t, d)] = ("push", rng.randrange(n_syms)) if act == "push" \
                else (act,)
    return APDA(n_syms, heads, ups, rule)


class TestAPDA:
    def test_planted_runaway_detected(self):
        apda = APDA(1, ("q",), {(0, "q"): "q"}, {(0, "q"): ("push", 0)})
        assert detect_runaway_cycle(apda) == [("q", 0)]

    def test_all_pop_has_none(self):
        apda = APDA(1, ("q",), {(0, "q"): "q"}, {(0, "q"): ("pop",)})
        assert detect_runaway_cycle(apda) is None

    def test_pigeonhole_on_random_apdas(self):
        rng = random.Random(6021)
        for _ in range(30):
            apda = _random_apda(rng)
            bound = len(apda.head_domain) * apda.stack_size
            cycles = runaway_cycles(apda)
            on_cycle = {node for cyc in cycles for node in cyc}
            stack = [rng.randrange(apda.stack_size) for _ in range(400)]
            d = apda.head_domain[0]
            hist = run_apda(apda, d, stack, 300)
            streak = 0
            for dd, t, v in hist:
                streak = streak + 1 if v == -1 else 0
                if streak > bound:
                    assert (dd, t) in on_cycle

    def test_apda_matches_lr_realization(self):
        rng = random.Random(99)
        for _ in range(10):
            apda = _random_apda(rng)
            machine, null = apda_to_lr(apda)
            stack = [rng.randrange(apda.stack_size) for _ in range(200)]
            d0 = apda.head_domain[0]
            hist = run_apda(apda, d0, stack, 60)
            lr_state = MachineState(
                left_tape((null,)), (d0, stack[0]),
                right_tape((1,), near=tuple(s + 1 for s in stack[1:])), 0)
            for (d, t, v) in hist:
                assert lr_state.head == (d, t)
                nxt = step_lrtm(machine, lr_state)
                assert nxt.z - lr_state.z == apda.velocity(t, d)
                lr_state = nxt


class TestCheckedRun:
    def test_run_with_admissibility_checks(self):
        from defectca.turing import run_lrtm
        m = _right_mover()
        s = MachineState(left_tape((0,)), "m",
                         right_tape((1, 0), near=(1, 1, 0, 1)), 0)
        out = run_lrtm(m, s, 10, check=True)
        assert out.z == 10
