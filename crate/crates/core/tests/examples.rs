macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::main().expect("example runs");
        }
    };
}

example!(quantify_qubit);
example!(pythagoras);
example!(phase_states);
example!(beam_splitter);
example!(infinite_limit);
example!(squeezed_coherent);
example!(displaced_number);
example!(overcomplete_counterexample);
example!(figure_sweep);
example!(verify_suite);
example!(state_spec);
