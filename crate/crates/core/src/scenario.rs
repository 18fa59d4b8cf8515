//! Freeway geometry, vehicle and VRU placement, and vehicle mobility.
//!
//! Two lanes (one per direction) run along `x ∈ [0, lane_length)`. The VRU
//! strip sits between them at lateral offset 0; lane centerlines are at
//! `±(lane_width / 2 + 2)` m. Vehicles are placed once per realization by a
//! one-dimensional hard-core process per lane and then move at constant speed,
//! wrapping around at the lane ends.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::Exp1;

use crate::geometry::Point;
use crate::math;
use crate::rng::uniform;
use crate::{Error, Result};

pub const LANE_COUNT: usize = 2;

/// Clearance between the VRU strip edge and a lane's inner edge.
const STRIP_CLEARANCE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadGeometry {
    pub lane_length: f64,
    pub lane_width: f64,
    /// Lateral offset of the VRUs (the pedestrian strip).
    pub vru_lateral_offset: f64,
    pub enb_position: Point,
}

impl Default for RoadGeometry {
    fn default() -> Self {
        Self {
            lane_length: 3000.0,
            lane_width: 4.0,
            vru_lateral_offset: 0.0,
            enb_position: Point::new(1500.0, 10.0),
        }
    }
}

impl RoadGeometry {
    /// Lateral offsets of the lane centerlines.
    pub fn lane_centerlines(&self) -> [f64; LANE_COUNT] {
        let off = self.lane_width / 2.0 + STRIP_CLEARANCE;
        [self.vru_lateral_offset + off, self.vru_lateral_offset - off]
    }

    /// Lane 0 carries traffic towards +x, lane 1 towards −x.
    pub fn lanes(&self) -> [Lane; LANE_COUNT] {
        let [a, b] = self.lane_centerlines();
        [
            Lane {
                index: 0,
                lateral: a,
                length: self.lane_length,
                direction: 1.0,
            },
            Lane {
                index: 1,
                lateral: b,
                length: self.lane_length,
                direction: -1.0,
            },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lane_length > 0.0 && self.lane_length.is_finite()) {
            return Err(Error::invalid("scenario.laneLengthKm", "must be > 0"));
        }
        if !(self.lane_width > 0.0 && self.lane_width.is_finite()) {
            return Err(Error::invalid("scenario.laneWidthM", "must be > 0"));
        }
        if !(0.0..=self.lane_length).contains(&self.enb_position.x) {
            return Err(Error::invalid(
                "scenario.enbXM",
                "eNB must lie within [0, lane length]",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lane {
    pub index: usize,
    pub lateral: f64,
    pub length: f64,
    /// +1 or −1.
    pub direction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vehicle {
    pub position: Point,
    /// m/s, signed by direction of travel.
    pub speed: f64,
    pub lane_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vru {
    pub id: u32,
    pub position: Point,
}

/// Speed magnitude range in m/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedRange {
    pub min: f64,
    pub max: f64,
}

impl SpeedRange {
    pub fn from_kmh(min: f64, max: f64) -> Self {
        Self {
            min: min / 3.6,
            max: max / 3.6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min >= 0.0 && self.max >= self.min && self.max.is_finite()) {
            return Err(Error::invalid("scenario.speedKmh", "need 0 <= min <= max"));
        }
        Ok(())
    }
}

impl Default for SpeedRange {
    fn default() -> Self {
        Self::from_kmh(70.0, 140.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardCoreParams {
    /// Target vehicles per meter, per lane.
    pub intensity: f64,
    /// Minimum spacing between consecutive vehicles on a lane, meters.
    pub distance: f64,
}

impl Default for HardCoreParams {
    fn default() -> Self {
        Self {
            intensity: 0.01,
            distance: 10.0,
        }
    }
}

impl HardCoreParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.intensity > 0.0 && self.intensity.is_finite()) {
            return Err(Error::invalid(
                "scenario.vehicleIntensityPerM",
                "must be > 0",
            ));
        }
        if !(self.distance >= 0.0 && self.distance.is_finite()) {
            return Err(Error::invalid(
                "scenario.interVehicleDistanceM",
                "must be >= 0",
            ));
        }
        if self.intensity * self.distance >= 1.0 {
            return Err(Error::InfeasibleHardCore {
                intensity: self.intensity,
                distance: self.distance,
            });
        }
        Ok(())
    }

    /// Mean of the exponential part of each gap.
    fn excess_gap(&self) -> f64 {
        1.0 / self.intensity - self.distance
    }
}

/// Places vehicles on one lane as a stationary hard-core renewal process:
/// consecutive gaps are `distance + Exp(mean = 1/intensity − distance)`, so the
/// density is exactly `intensity` and no two vehicles are closer than
/// `distance`. With `distance = 0` this is a Poisson process.
///
/// The first vehicle is drawn from the forward-recurrence law of the gap
/// distribution, which makes the pattern stationary along the lane.
pub fn sample_vehicles<R: Rng + ?Sized>(
    params: &HardCoreParams,
    lane: &Lane,
    speeds: &SpeedRange,
    rng: &mut R,
) -> Result<Vec<Vehicle>> {
    params.validate()?;
    if !(lane.length > 0.0) {
        return Err(Error::invalid("scenario.laneLengthKm", "must be > 0"));
    }
    let excess = params.excess_gap();
    let mean_gap = 1.0 / params.intensity;

    let mut x = if rng.random::<f64>() < params.distance / mean_gap {
        uniform(rng, 0.0, params.distance)
    } else {
        params.distance + excess * rng.sample::<f64, _>(Exp1)
    };

    let mut out = Vec::new();
    while x < lane.length {
        let speed = uniform(rng, speeds.min, speeds.max);
        out.push(Vehicle {
            position: Point::new(x, lane.lateral),
            speed: lane.direction * speed,
            lane_index: lane.index,
        });
        x += params.distance + excess * rng.sample::<f64, _>(Exp1);
    }
    Ok(out)
}

/// `n` VRUs with i.i.d. uniform `x` on `strip` and fixed lateral offset.
pub fn sample_vrus<R: Rng + ?Sized>(
    n: usize,
    strip: (f64, f64),
    lateral: f64,
    rng: &mut R,
) -> Result<Vec<Vru>> {
    if n == 0 {
        return Err(Error::NoVrus);
    }
    if !(strip.1 > strip.0) {
        return Err(Error::invalid("scenario.vruStripM", "need min < max"));
    }
    Ok((0..n)
        .map(|i| Vru {
            id: i as u32,
            position: Point::new(uniform(rng, strip.0, strip.1), lateral),
        })
        .collect())
}

/// One realization: road, vehicles (both lanes) and VRUs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: RoadGeometry,
    pub vehicles: Vec<Vehicle>,
    pub vrus: Vec<Vru>,
}

impl Scenario {
    /// Moves every vehicle by `speed · dt` along its lane, wrapping modulo
    /// the lane length. Vehicle count is conserved; the hard-core spacing is
    /// not (opposite directions may pass each other).
    pub fn advance(&mut self, dt: f64) {
        if dt == 0.0 {
            return;
        }
        let len = self.geometry.lane_length;
        for v in &mut self.vehicles {
            v.position.x = math::rem_euclid(v.position.x + v.speed * dt, len);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, Streams};

    fn rng(i: u64) -> crate::rng::SimRng {
        Streams::new(7).stream(Purpose::Vehicles, i, 0, 0)
    }

    fn lane(length: f64) -> Lane {
        Lane {
            index: 0,
            lateral: 4.0,
            length,
            direction: 1.0,
        }
    }

    #[test]
    fn lanes_straddle_the_strip() {
        let g = RoadGeometry::default();
        assert_eq!(g.lane_centerlines(), [4.0, -4.0]);
        assert_eq!(g.lanes()[1].direction, -1.0);
    }

    #[test]
    fn infeasible_intensity_rejected() {
        let p = HardCoreParams {
            intensity: 0.2,
            distance: 10.0,
        };
        let err = sample_vehicles(&p, &lane(3000.0), &SpeedRange::default(), &mut rng(0));
        assert!(matches!(err, Err(Error::InfeasibleHardCore { .. })));
        // λδ just below 1 is still feasible
        let p = HardCoreParams {
            intensity: 0.099,
            distance: 10.0,
        };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn vanishing_intensity_gives_empty_lane() {
        let p = HardCoreParams {
            intensity: 1e-9,
            distance: 10.0,
        };
        let mut total = 0;
        for i in 0..100 {
            total += sample_vehicles(&p, &lane(3000.0), &SpeedRange::default(), &mut rng(i))
                .unwrap()
                .len();
        }
        assert!(total <= 1);
    }

    #[test]
    fn vehicles_are_on_their_lane_with_bounded_speed() {
        let speeds = SpeedRange::default();
        let l = Lane {
            index: 1,
            lateral: -4.0,
            length: 3000.0,
            direction: -1.0,
        };
        let v = sample_vehicles(&HardCoreParams::default(), &l, &speeds, &mut rng(1)).unwrap();
        assert!(!v.is_empty());
        for veh in &v {
            assert_eq!(veh.position.y, -4.0);
            assert_eq!(veh.lane_index, 1);
            assert!(veh.speed <= -speeds.min && veh.speed >= -speeds.max);
            assert!((0.0..3000.0).contains(&veh.position.x));
        }
    }

    #[test]
    fn vru_examples() {
        let mut r = rng(2);
        assert_eq!(sample_vrus(0, (0.0, 1.0), 0.0, &mut r), Err(Error::NoVrus));

        let v = sample_vrus(3, (0.0, 3000.0), 0.0, &mut r).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|u| (0.0..=3000.0).contains(&u.position.x)));

        let v = sample_vrus(1, (1500.0, 1500.0 + 1e-6), 0.0, &mut r).unwrap();
        assert!((v[0].position.x - 1500.0).abs() < 1e-5);

        let v = sample_vrus(100, (1200.0, 1800.0), 0.0, &mut r).unwrap();
        assert_eq!(v.len(), 100);
        let mean = v.iter().map(|u| u.position.x).sum::<f64>() / 100.0;
        // σ of the mean is 600/√12/10 ≈ 17 m
        assert!((mean - 1500.0).abs() < 70.0, "mean {mean}");
        assert!(v.iter().enumerate().all(|(i, u)| u.id == i as u32));
    }

    fn one_vehicle(x: f64, speed: f64) -> Scenario {
        Scenario {
            geometry: RoadGeometry::default(),
            vehicles: alloc::vec![Vehicle {
                position: Point::new(x, 4.0),
                speed,
                lane_index: 0,
            }],
            vrus: Vec::new(),
        }
    }

    #[test]
    fn advance_kinematics() {
        let mut s = one_vehicle(100.0, 20.0);
        s.advance(1.0);
        assert_eq!(s.vehicles[0].position.x, 120.0);

        let mut s = one_vehicle(2990.0, 20.0);
        s.advance(1.0);
        assert!((s.vehicles[0].position.x - 10.0).abs() < 1e-9);

        let mut s = one_vehicle(5.0, -20.0);
        s.advance(1.0);
        assert!((s.vehicles[0].position.x - 2985.0).abs() < 1e-9);

        let s0 = one_vehicle(1234.5, 33.0);
        let mut s = s0.clone();
        s.advance(0.0);
        assert_eq!(s, s0);
    }
}
