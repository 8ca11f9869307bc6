//! Catalog transcription checks, exact parameter counts, and the
//! complexity comparison against the published per-symbol FLOP tables.

use fiberlab_zoo::{
    build, catalog, catalog_desk, default_mbar, default_mbar_desk, model_cost, ArchSpec,
    CostModel, InputLayout, LayerSpec, CATALOG_NAMES,
};

/// Window samples (2M+1) for a model at its default memory knob.
fn default_window(name: &str, rx_mode: u8) -> usize {
    let m_bar = default_mbar(name, rx_mode).unwrap();
    let sps = if rx_mode == 1 { 1 } else { 2 };
    2 * fiberlab_sim::windows::half_window_samples(m_bar, sps) + 1
}

fn cost_of(name: &str, rx_mode: u8) -> fiberlab_zoo::ModelCost {
    let spec = catalog(name, rx_mode).unwrap();
    model_cost(&spec, default_window(name, rx_mode), &CostModel::default()).unwrap()
}

#[test]
fn crnn_rows_match_the_table() {
    let spec = catalog("crnn", 1).unwrap();
    assert_eq!(spec.input, InputLayout::Interleaved);
    let expect = [
        LayerSpec::Conv1d { kernels: 4, l_ker: 49, stride: 1, activation: fiberlab_zoo::arch::Act::Relu },
        LayerSpec::Conv1d { kernels: 36, l_ker: 9, stride: 9, activation: fiberlab_zoo::arch::Act::Relu },
        LayerSpec::Conv1d { kernels: 180, l_ker: 5, stride: 5, activation: fiberlab_zoo::arch::Act::Relu },
        LayerSpec::Rnn {
            units: 454,
            activation: fiberlab_zoo::arch::Act::Tanh,
            bidirectional: false,
            many_to_one: true,
        },
    ];
    assert_eq!(spec.layers, expect);

    let spec2 = catalog("crnn", 2).unwrap();
    match &spec2.layers[..] {
        [LayerSpec::Conv1d { kernels: 4, l_ker: 99, stride: 1, .. }, LayerSpec::Conv1d { kernels: 30, l_ker: 11, stride: 11, .. }, LayerSpec::Conv1d { kernels: 125, l_ker: 9, stride: 9, .. }, LayerSpec::Rnn { units: 494, many_to_one: true, bidirectional: false, .. }] => {
        }
        other => panic!("unexpected crnn rx2 stack: {other:?}"),
    }
}

#[test]
fn bi_lstm_has_144_total_units_split_per_direction() {
    let spec = catalog("bi_lstm", 1).unwrap();
    match &spec.layers[0] {
        LayerSpec::Lstm { units: 144, bidirectional: true, many_to_one: false } => {}
        other => panic!("unexpected: {other:?}"),
    }
    // 72 per direction after building.
    let model = build(&spec, default_window("bi_lstm", 1), 0).unwrap();
    let lstm = model
        .layers
        .iter()
        .find_map(|l| match l {
            fiberlab_nn::Layer::Lstm(l) => Some(l),
            _ => None,
        })
        .unwrap();
    assert_eq!(lstm.hidden_per_direction(), 72);
    assert!(lstm.is_bidirectional());
}

#[test]
fn crnn_parameter_counts_are_exact() {
    assert_eq!(cost_of("crnn", 1).params, 324_418);
    assert_eq!(cost_of("crnn", 2).params, 344_281);
    // And they match the built models parameter for parameter.
    for rx in [1u8, 2] {
        let spec = catalog("crnn", rx).unwrap();
        let model = build(&spec, default_window("crnn", rx), 7).unwrap();
        assert_eq!(model.n_params() as u64, cost_of("crnn", rx).params);
    }
}

#[test]
fn crnn_parameter_count_is_window_independent() {
    let spec = catalog("crnn", 1).unwrap();
    let cost = CostModel::default();
    for win in [191usize, 205, 229, 257] {
        assert_eq!(model_cost(&spec, win, &cost).unwrap().params, 324_418, "window {win}");
    }
}

#[test]
fn head_on_454_features_has_1820_parameters() {
    let c = cost_of("crnn", 1);
    let head = c.layers.last().unwrap();
    assert_eq!(head.kind, "fc_head");
    assert_eq!(head.params, 1_820);
}

#[test]
fn built_models_match_cost_model_parameter_counts() {
    for name in CATALOG_NAMES {
        for rx in [1u8, 2] {
            let spec = catalog(name, rx).unwrap();
            let window = default_window(name, rx);
            let model = build(&spec, window, 1).unwrap();
            let cost = model_cost(&spec, window, &CostModel::default()).unwrap();
            assert_eq!(model.n_params() as u64, cost.params, "{name} rx{rx}");
        }
    }
}

#[test]
fn every_desk_model_builds_and_runs() {
    for name in CATALOG_NAMES {
        for rx in [1u8, 2] {
            let spec = catalog_desk(name, rx).unwrap();
            let m_bar = default_mbar_desk(name, rx).unwrap();
            let sps = if rx == 1 { 1 } else { 2 };
            let window = 2 * fiberlab_sim::windows::half_window_samples(m_bar, sps) + 1;
            let model = build(&spec, window, 3).unwrap();
            let x = fiberlab_nn::Tensor::zeros(2 * window, 2);
            let out = model.forward(&x).unwrap();
            assert_eq!(out.len(), 4, "{name} rx{rx}");
        }
    }
}

#[test]
fn crnn_final_conv_depth_feeds_the_rnn_width() {
    for (rx, depth) in [(1u8, 180usize), (2, 125)] {
        let spec = catalog("crnn", rx).unwrap();
        match (&spec.layers[2], &spec.layers[3]) {
            (LayerSpec::Conv1d { kernels, .. }, LayerSpec::Rnn { .. }) => {
                assert_eq!(*kernels, depth);
            }
            other => panic!("unexpected: {other:?}"),
        }
        // The built RNN consumes exactly that many features per step.
        let model = build(&spec, default_window("crnn", rx), 0).unwrap();
        let rnn = model
            .layers
            .iter()
            .find_map(|l| match l {
                fiberlab_nn::Layer::Rnn(r) => Some(r),
                _ => None,
            })
            .unwrap();
        assert_eq!(rnn.fwd.input(), depth);
    }
}

#[test]
fn published_flop_totals_are_reproduced_within_ten_percent() {
    // (model, rx, published FLOPs/symbol)
    let table = [
        ("crnn", 1u8, 16.47e5),
        ("bi_rnn", 1, 33.40e5),
        ("bi_gru", 1, 39.81e5),
        ("bi_lstm", 1, 54.61e5),
        ("cnn_bi_lstm", 1, 47.39e5),
        ("crnn", 2, 20.36e5),
        ("bi_rnn", 2, 42.50e5),
        ("bi_gru", 2, 48.68e5),
        ("bi_lstm", 2, 66.53e5),
        ("cnn_bi_lstm", 2, 63.99e5),
    ];
    for (name, rx, expect) in table {
        let got = cost_of(name, rx).flops_per_symbol;
        let rel = (got - expect).abs() / expect;
        assert!(rel < 0.10, "{name} rx{rx}: {got:.4e} vs {expect:.4e} ({:.1}%)", rel * 100.0);
    }
}

#[test]
fn crnn_reductions_match_published_percentages() {
    let expect = [("bi_rnn", 50.6), ("bi_gru", 58.6), ("bi_lstm", 69.8), ("cnn_bi_lstm", 65.2)];
    let crnn = cost_of("crnn", 1).flops_per_symbol;
    for (name, pct) in expect {
        let other = cost_of(name, 1).flops_per_symbol;
        let reduction = 100.0 * (1.0 - crnn / other);
        assert!((reduction - pct).abs() < 3.0, "{name}: {reduction:.2}% vs {pct}%");
        assert!(crnn / other < 0.5, "{name}: ratio {}", crnn / other);
    }
    // Both receiver modes keep the >= 50% margin.
    let crnn2 = cost_of("crnn", 2).flops_per_symbol;
    for name in ["bi_rnn", "bi_gru", "bi_lstm", "cnn_bi_lstm"] {
        assert!(crnn2 / cost_of(name, 2).flops_per_symbol < 0.5, "{name} rx2");
    }
}

#[test]
fn parameter_counts_do_not_depend_on_eta() {
    for eta in [0u64, 4, 15, 100] {
        let spec = catalog("bi_gru", 1).unwrap();
        let c = model_cost(&spec, default_window("bi_gru", 1), &CostModel::with_eta(eta)).unwrap();
        assert_eq!(c.params, cost_of("bi_gru", 1).params);
    }
}

#[test]
fn dropout_and_flatten_cost_nothing() {
    let c = cost_of("mlp", 1);
    for layer in &c.layers {
        if layer.kind == "dropout" || layer.kind == "flatten" {
            assert_eq!(layer.flops, 0);
            assert_eq!(layer.params, 0);
        }
    }
}

#[test]
fn unknown_names_are_rejected() {
    assert!(catalog("transformer", 1).is_err());
    assert!(catalog("crnn", 3).is_err());
    assert!(default_mbar("nope", 1).is_err());
}

#[test]
fn shape_errors_name_the_failing_layer() {
    let spec = ArchSpec {
        name: "broken".into(),
        rx_mode: 1,
        input: InputLayout::Interleaved,
        layers: vec![
            LayerSpec::Conv1d {
                kernels: 4,
                l_ker: 49,
                stride: 1,
                activation: fiberlab_zoo::arch::Act::Relu,
            },
            LayerSpec::Conv1d {
                kernels: 4,
                l_ker: 999,
                stride: 1,
                activation: fiberlab_zoo::arch::Act::Relu,
            },
        ],
    };
    let err = build(&spec, 41, 0).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("layer 1"), "{msg}");
}

#[test]
fn sweep_scaling_preserves_structure() {
    let spec = catalog_desk("crnn", 1).unwrap();
    for units in [16usize, 32, 96] {
        let scaled = spec.with_units(units).unwrap();
        let window = 33;
        let model = build(&scaled, window, 0).unwrap();
        let rnn = model
            .layers
            .iter()
            .find_map(|l| match l {
                fiberlab_nn::Layer::Rnn(r) => Some(r),
                _ => None,
            })
            .unwrap();
        assert_eq!(rnn.hidden_per_direction(), units);
    }
}
