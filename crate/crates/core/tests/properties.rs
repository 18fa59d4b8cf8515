//! Property tests against brute-force and closed-form oracles.

use proptest::prelude::*;

use cv2x_mec::channel::pathloss_db;
use cv2x_mec::geometry::Point;
use cv2x_mec::latency::{
    backhaul_latency, compose_e2e, execution_latency, Architecture, LatencyComponents,
};
use cv2x_mec::radio::{
    dl_latency, dl_share, select_cluster, ul_allocation, ul_latency, ClusterMember, PrbPool,
    VehicleCluster,
};
use cv2x_mec::scenario::{Vehicle, Vru};
use cv2x_mec::traffic::{concurrent_count, CamJob};

fn job(vru_id: u32, bin: u32, bits: f64) -> CamJob {
    CamJob {
        vru_id,
        size_bits: bits,
        offset_bin: bin,
        compute_density: 200.0,
        period_index: 0,
    }
}

fn jobs_strategy() -> impl Strategy<Value = (Vec<CamJob>, u32)> {
    (1u32..=10).prop_flat_map(|bins| {
        (prop::collection::vec(0..bins, 1..200), Just(bins)).prop_map(|(b, bins)| {
            let jobs = b
                .into_iter()
                .enumerate()
                .map(|(i, bin)| job(i as u32, bin, 1e4))
                .collect();
            (jobs, bins)
        })
    })
}

fn vehicles_strategy() -> impl Strategy<Value = Vec<Vehicle>> {
    // coarse grid coordinates so that distance ties actually happen
    prop::collection::vec((0u32..300, 0usize..2), 1..300).prop_map(|v| {
        v.into_iter()
            .map(|(x, lane)| Vehicle {
                position: Point::new(x as f64 * 10.0, if lane == 0 { 4.0 } else { -4.0 }),
                speed: 0.0,
                lane_index: lane,
            })
            .collect()
    })
}

fn brute_cluster(vru: &Vru, vehicles: &[Vehicle], m: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vehicles.len()).collect();
    idx.sort_by(|&a, &b| {
        let (va, vb) = (&vehicles[a], &vehicles[b]);
        let (da, db) = (
            vru.position.distance(&va.position),
            vru.position.distance(&vb.position),
        );
        da.partial_cmp(&db)
            .unwrap()
            .then(va.position.x.partial_cmp(&vb.position.x).unwrap())
            .then(va.lane_index.cmp(&vb.lane_index))
            .then(a.cmp(&b))
    });
    idx.truncate(m);
    idx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn concurrent_count_matches_double_loop((jobs, _bins) in jobs_strategy()) {
        for a in &jobs {
            let mut n = 0;
            for b in &jobs {
                if b.offset_bin == a.offset_bin {
                    n += 1;
                }
            }
            prop_assert_eq!(concurrent_count(&jobs, a.vru_id).unwrap(), n);
        }
    }

    #[test]
    fn uplink_allocation_conserves_prbs((jobs, bins) in jobs_strategy()) {
        let pool = PrbPool::default();
        let alloc = ul_allocation(&jobs, bins, &pool);
        let mut per_bin = vec![0.0; bins as usize];
        for j in &jobs {
            per_bin[j.offset_bin as usize] += alloc[&j.vru_id];
        }
        for total in per_bin.into_iter().filter(|t| *t > 0.0) {
            prop_assert!((total - pool.total_prbs()).abs() < 1e-9);
        }
    }

    #[test]
    fn select_cluster_matches_full_sort(
        vehicles in vehicles_strategy(),
        vx in 0.0f64..3000.0,
        m in 1usize..12,
    ) {
        let vru = Vru { id: 3, position: Point::new(vx, 0.0) };
        let got: Vec<usize> = select_cluster(&vru, &vehicles, m)
            .unwrap()
            .members
            .iter()
            .map(|c| c.vehicle)
            .collect();
        prop_assert_eq!(got, brute_cluster(&vru, &vehicles, m));
    }

    #[test]
    fn downlink_conserves_prbs(sizes in prop::collection::vec(1usize..10, 1..30)) {
        let pool = PrbPool::default();
        let total: usize = sizes.iter().sum();
        let share = dl_share(total, &pool).unwrap();
        prop_assert!((share * total as f64 - pool.total_prbs()).abs() < 1e-9);
    }

    #[test]
    fn dl_latency_is_monotone_in_cluster_size(
        snrs in prop::collection::vec(-5.0f64..30.0, 2..10),
        bits in 8e3f64..12e3,
    ) {
        let pool = PrbPool::default();
        let j = job(0, 0, bits);
        let mut prev = 0.0;
        for m in 1..=snrs.len() {
            let cluster = VehicleCluster {
                vru_id: 0,
                members: (0..m).map(|i| ClusterMember { vehicle: i, distance: i as f64 }).collect(),
            };
            let d = dl_latency(&j, &cluster, 10.0, |c| Ok(snrs[c.vehicle]), &pool).unwrap();
            prop_assert!(d.latency >= prev);
            prev = d.latency;
        }
    }

    #[test]
    fn ul_latency_is_monotone(
        snr in -5.0f64..30.0,
        dsnr in 0.01f64..10.0,
        prbs in 1.0f64..50.0,
        dprbs in 0.01f64..10.0,
        bits in 8e3f64..12e3,
    ) {
        let pool = PrbPool::default();
        let j = job(0, 0, bits);
        let t = ul_latency(&j, prbs, snr, &pool).unwrap();
        prop_assert!(ul_latency(&j, prbs, snr + dsnr, &pool).unwrap() < t);
        prop_assert!(ul_latency(&j, prbs + dprbs, snr, &pool).unwrap() < t);
    }

    #[test]
    fn latencies_are_linear_in_packet_size(
        bits in 1e3f64..2e4,
        k in 1.5f64..4.0,
        n in 1usize..50,
        snr in 0.0f64..20.0,
    ) {
        let pool = PrbPool::default();
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
        prop_assert!(rel(backhaul_latency(k * bits, n, 1e7), k * backhaul_latency(bits, n, 1e7)));
        prop_assert!(rel(
            execution_latency(k * bits, 200.0, n, 9e9),
            k * execution_latency(bits, 200.0, n, 9e9)
        ));
        prop_assert!(rel(
            ul_latency(&job(0, 0, k * bits), 10.0, snr, &pool).unwrap(),
            k * ul_latency(&job(0, 0, bits), 10.0, snr, &pool).unwrap()
        ));
    }

    #[test]
    fn decomposition_identity(
        ul in 0.0f64..0.1, bh in 0.0f64..0.1, tn in 0.0f64..0.1,
        exc in 0.0f64..0.1, dl in 0.0f64..0.1,
    ) {
        let c = LatencyComponents { ul, bh, tn_cn: tn, exc_cloud: exc, exc_mec: exc, dl };
        let cloud = compose_e2e(&c, Architecture::Cloud);
        let mec = compose_e2e(&c, Architecture::Mec);
        prop_assert!(((cloud - mec) - 2.0 * (bh + tn)).abs() <= 1e-12);
        prop_assert!(mec <= cloud);
    }

    #[test]
    fn pathloss_is_increasing_beyond_clamp(d in 1.0f64..5000.0, dd in 0.1f64..100.0) {
        prop_assert!(pathloss_db(d + dd, 10.0, 1.5, 2.0).unwrap() > pathloss_db(d, 10.0, 1.5, 2.0).unwrap());
    }
}
