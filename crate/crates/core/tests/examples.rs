//! Runs every example's `main` so the examples stay working.

macro_rules! examples {
    ($($name:ident),* $(,)?) => {
        $(
            mod $name {
                include!(concat!("../examples/", stringify!($name), ".rs"));

                #[test]
                fn runs() {
                    main().unwrap();
                }
            }
        )*
    };
}

examples!(
    word_counts,
    classical_pressure,
    bowen_root,
    bs_dimension,
    partition_sums,
    r_diagnostic,
    gibbs_measure,
    variational_principle,
    system_file,
);
