//! Small hand-checkable instances.

use crate::instance::{Instance, InstanceSpec, Item, Metric};

/// Five cities, four items, explicit distances.
///
/// City ids below are one-based as in the drawing; internally they shift
/// down by one. Items: 1<4, 20> at city 2, 2<2, 8> at city 3, 3<4, 20> at
/// city 4 and 4<1, 4> at city 5 (weight, profit). W = 6, R = 1,
/// speeds in [0.1, 1].
pub fn five_city_spec() -> InstanceSpec {
    let n = 5;
    let mut d = vec![0.0; n * n];
    let edges = [
        (1, 2, 1.0),
        (2, 3, 2.0),
        (3, 4, 3.0),
        (4, 5, 4.0),
        (5, 1, 1.0),
        (1, 3, 2.5),
        (1, 4, 4.5),
        (2, 4, 4.5),
        (2, 5, 1.8),
        (3, 5, 3.0),
    ];
    for (a, b, w) in edges {
        d[(a - 1) * n + (b - 1)] = w;
        d[(b - 1) * n + (a - 1)] = w;
    }
    InstanceSpec {
        name: "five_city".into(),
        knapsack_data_type: "hand".into(),
        coords: vec![(0.0, 0.0), (0.0, 2.0), (2.5, 3.25), (5.0, 1.0), (2.0, -1.0)],
        explicit_distances: Some(d),
        items: vec![
            Item { profit: 20, weight: 4, city: 1 },
            Item { profit: 8, weight: 2, city: 2 },
            Item { profit: 20, weight: 4, city: 3 },
            Item { profit: 4, weight: 1, city: 4 },
        ],
        capacity: 6,
        renting_rate: 1.0,
        min_speed: 0.1,
        max_speed: 1.0,
        metric: Metric::Explicit,
    }
}

pub fn five_city() -> Instance {
    Instance::new(five_city_spec()).expect("fixture is valid")
}
