/// Post-implementation results of the four reference designs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasuredDesign {
    pub name: &'static str,
    pub num_classes: usize,
    pub clauses_per_class: usize,
    pub generic_latency_ns: f64,
    pub fpt18_latency_ns: f64,
    pub time_domain_latency_ns: f64,
    pub generic_luts_ffs: u64,
    pub fpt18_luts_ffs: u64,
    pub time_domain_luts_ffs: u64,
    pub async21_luts_ffs: u64,
}

pub const MEASURED_DESIGNS: [MeasuredDesign; 4] = [
    MeasuredDesign {
        name: "Iris10",
        num_classes: 3,
        clauses_per_class: 10,
        generic_latency_ns: 6.467,
        fpt18_latency_ns: 10.747,
        time_domain_latency_ns: 10.682,
        generic_luts_ffs: 34,
        fpt18_luts_ffs: 58,
        time_domain_luts_ffs: 56,
        async21_luts_ffs: 288,
    },
    MeasuredDesign {
        name: "Iris50",
        num_classes: 3,
        clauses_per_class: 50,
        generic_latency_ns: 11.749,
        fpt18_latency_ns: 22.787,
        time_domain_latency_ns: 23.811,
        generic_luts_ffs: 233,
        fpt18_luts_ffs: 195,
        time_domain_luts_ffs: 176,
        async21_luts_ffs: 966,
    },
    MeasuredDesign {
        name: "MNIST50",
        num_classes: 10,
        clauses_per_class: 50,
        generic_latency_ns: 35.966,
        fpt18_latency_ns: 46.975,
        time_domain_latency_ns: 28.375,
        generic_luts_ffs: 729,
        fpt18_luts_ffs: 722,
        time_domain_luts_ffs: 571,
        async21_luts_ffs: 3640,
    },
    MeasuredDesign {
        name: "MNIST100",
        num_classes: 10,
        clauses_per_class: 100,
        generic_latency_ns: 42.629,
        fpt18_latency_ns: 64.104,
        time_domain_latency_ns: 43.294,
        generic_luts_ffs: 1498,
        fpt18_luts_ffs: 1245,
        time_domain_luts_ffs: 1071,
        async21_luts_ffs: 7210,
    },
];
