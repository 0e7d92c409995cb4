use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Stage of the acquisition, pointing and tracking sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AptState {
    Stabilize,
    Acquire,
    CoarseTrack,
    FineTrack1,
    FineTrack2,
    Linked,
    Reacquire,
}

impl AptState {
    pub const ALL: [AptState; 7] = [
        AptState::Stabilize,
        AptState::Acquire,
        AptState::CoarseTrack,
        AptState::FineTrack1,
        AptState::FineTrack2,
        AptState::Linked,
        AptState::Reacquire,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AptState::Stabilize => "Stabilize",
            AptState::Acquire => "Acquire",
            AptState::CoarseTrack => "CoarseTrack",
            AptState::FineTrack1 => "FineTrack1",
            AptState::FineTrack2 => "FineTrack2",
            AptState::Linked => "Linked",
            AptState::Reacquire => "Reacquire",
        }
    }

    /// States in which a beacon is held and the link can carry traffic.
    pub fn is_tracking(self) -> bool {
        matches!(
            self,
            AptState::CoarseTrack | AptState::FineTrack1 | AptState::FineTrack2 | AptState::Linked
        )
    }

    /// Index of the innermost closed loop: 0 coarse, 1 first fine, 2 second
    /// fine. `None` outside tracking.
    pub fn innermost_stage(self) -> Option<usize> {
        match self {
            AptState::CoarseTrack => Some(0),
            AptState::FineTrack1 => Some(1),
            AptState::FineTrack2 | AptState::Linked => Some(2),
            _ => None,
        }
    }

    /// Whether every lock this state depends on is present.
    pub fn required_locks_held(self, locks: Locks) -> bool {
        match self.innermost_stage() {
            Some(0) => locks.coarse,
            Some(1) => locks.coarse && locks.fine1,
            Some(_) => locks.all(),
            None => true,
        }
    }

    /// The complete edge set, self-loops included.
    pub fn is_edge(from: AptState, to: AptState) -> bool {
        use AptState::*;
        if from == to {
            return from != Reacquire;
        }
        matches!(
            (from, to),
            (Stabilize, Acquire)
                | (Acquire, CoarseTrack)
                | (CoarseTrack, FineTrack1)
                | (FineTrack1, FineTrack2)
                | (FineTrack2, Linked)
                | (CoarseTrack | FineTrack1 | FineTrack2 | Linked, Reacquire)
                | (Reacquire, Acquire)
        )
    }
}

impl fmt::Display for AptState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AptState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AptState::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown APT state `{s}`"))
    }
}

/// Beacon lock per tracking stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Locks {
    pub coarse: bool,
    pub fine1: bool,
    pub fine2: bool,
}

impl Locks {
    pub fn all(self) -> bool {
        self.coarse && self.fine1 && self.fine2
    }
}

/// Consecutive-frame counters maintained by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dwell {
    /// Frames spent in the current state, this one included.
    pub in_state: u32,
    /// Consecutive frames with the residual below the link threshold.
    pub below_link: u32,
    /// Consecutive frames missing a lock the current state requires.
    pub lock_lost: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionConfig {
    /// Frames of IMU stabilization before acquisition starts.
    pub stabilize_frames: u32,
    /// Largest coarse residual at which the first fine loop may engage.
    pub capture_threshold_rad: f64,
    pub link_threshold_rad: f64,
    pub link_dwell_frames: u32,
    /// Debounce before a lost lock forces reacquisition.
    pub lock_loss_frames: u32,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        Self {
            stabilize_frames: 200,
            capture_threshold_rad: 5e-3,
            link_threshold_rad: 20e-6,
            link_dwell_frames: 100,
            lock_loss_frames: 50,
        }
    }
}

/// Which fine loops may engage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEnable {
    pub fine1: bool,
    pub fine2: bool,
}

impl StageEnable {
    pub const ALL: StageEnable = StageEnable {
        fine1: true,
        fine2: true,
    };
    pub const COARSE_ONLY: StageEnable = StageEnable {
        fine1: false,
        fine2: false,
    };
}

/// Next APT state.
///
/// `residual_rad` is the measured radial offset of the innermost active
/// loop (infinite when its frame is invalid).
pub fn apt_transition(
    current: AptState,
    locks: Locks,
    residual_rad: f64,
    dwell: Dwell,
    config: &TransitionConfig,
    enabled: StageEnable,
) -> AptState {
    use AptState::*;
    if current.is_tracking() && dwell.lock_lost >= config.lock_loss_frames {
        return Reacquire;
    }
    match current {
        Stabilize if dwell.in_state >= config.stabilize_frames => Acquire,
        Acquire if locks.coarse => CoarseTrack,
        CoarseTrack if enabled.fine1 && locks.fine1 && residual_rad < config.capture_threshold_rad => FineTrack1,
        FineTrack1 if enabled.fine2 && locks.fine2 => FineTrack2,
        FineTrack2 if dwell.below_link >= config.link_dwell_frames => Linked,
        Reacquire => Acquire,
        s => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> TransitionConfig {
        TransitionConfig::default()
    }

    const ALL_LOCKS: Locks = Locks {
        coarse: true,
        fine1: true,
        fine2: true,
    };

    #[test]
    fn coarse_hands_over_to_first_fine_loop() {
        let locks = Locks {
            coarse: true,
            fine1: true,
            fine2: false,
        };
        let next = apt_transition(
            AptState::CoarseTrack,
            locks,
            2e-3,
            Dwell::default(),
            &cfg(),
            StageEnable::ALL,
        );
        assert_eq!(next, AptState::FineTrack1);
        let far = apt_transition(
            AptState::CoarseTrack,
            locks,
            6e-3,
            Dwell::default(),
            &cfg(),
            StageEnable::ALL,
        );
        assert_eq!(far, AptState::CoarseTrack);
        let masked = apt_transition(
            AptState::CoarseTrack,
            locks,
            2e-3,
            Dwell::default(),
            &cfg(),
            StageEnable::COARSE_ONLY,
        );
        assert_eq!(masked, AptState::CoarseTrack);
    }

    #[test]
    fn linked_holds_with_all_locks() {
        let next = apt_transition(
            AptState::Linked,
            ALL_LOCKS,
            1e-6,
            Dwell::default(),
            &cfg(),
            StageEnable::ALL,
        );
        assert_eq!(next, AptState::Linked);
    }

    #[test]
    fn fifty_frame_dropout_forces_reacquire() {
        let locks = Locks {
            coarse: true,
            fine1: true,
            fine2: false,
        };
        let mut dwell = Dwell::default();
        let mut state = AptState::FineTrack2;
        for frame in 1..=50 {
            dwell.lock_lost = if state.required_locks_held(locks) {
                0
            } else {
                dwell.lock_lost + 1
            };
            state = apt_transition(state, locks, f64::INFINITY, dwell, &cfg(), StageEnable::ALL);
            if frame < 50 {
                assert_eq!(state, AptState::FineTrack2, "frame {frame}");
            }
        }
        assert_eq!(state, AptState::Reacquire);
        let next = apt_transition(state, locks, f64::INFINITY, Dwell::default(), &cfg(), StageEnable::ALL);
        assert_eq!(next, AptState::Acquire);
    }

    #[test]
    fn link_needs_dwell() {
        let mut dwell = Dwell {
            below_link: 99,
            ..Dwell::default()
        };
        assert_eq!(
            apt_transition(AptState::FineTrack2, ALL_LOCKS, 1e-6, dwell, &cfg(), StageEnable::ALL),
            AptState::FineTrack2
        );
        dwell.below_link = 100;
        assert_eq!(
            apt_transition(AptState::FineTrack2, ALL_LOCKS, 1e-6, dwell, &cfg(), StageEnable::ALL),
            AptState::Linked
        );
    }

    #[test]
    fn names_round_trip() {
        for s in AptState::ALL {
            assert_eq!(s.name().parse::<AptState>().unwrap(), s);
        }
        assert!("Linkd".parse::<AptState>().is_err());
    }

    fn state() -> impl Strategy<Value = AptState> {
        proptest::sample::select(AptState::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn transitions_follow_edge_set(
            s in state(),
            c in any::<bool>(), f1 in any::<bool>(), f2 in any::<bool>(),
            residual in 0.0f64..1e-2,
            in_state in 0u32..400, below in 0u32..200, lost in 0u32..100,
            e1 in any::<bool>(), e2 in any::<bool>(),
        ) {
            let locks = Locks { coarse: c, fine1: f1, fine2: f2 };
            let dwell = Dwell { in_state, below_link: below, lock_lost: lost };
            let next = apt_transition(s, locks, residual, dwell, &cfg(), StageEnable { fine1: e1, fine2: e2 });
            prop_assert!(AptState::is_edge(s, next), "{s} -> {next}");
        }
    }
}
