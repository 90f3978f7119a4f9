use crate::codec::rv_schedule;
use crate::error::Result;
use crate::pucch::AckNackDecision;

use super::{HarqPhy, HarqPool, HarqScheme, PendingBlock, SubframeOutcome, TxContext, BURST_LENGTH};

/// 1-based process index served in `subframe`.
pub fn harq_index(subframe: u64, n_harq: usize) -> usize {
    (subframe % n_harq.max(1) as u64) as usize + 1
}

/// Dispatches one step of `scheme`. For burst mode `subframe` counts bursts.
pub fn step<P: HarqPhy + ?Sized>(
    scheme: HarqScheme,
    pool: &mut HarqPool,
    phy: &mut P,
    subframe: u64,
) -> Result<SubframeOutcome> {
    match scheme {
        HarqScheme::Type1NoCombining => step_type1_nocomb(pool, phy, subframe),
        HarqScheme::Type1ChaseCombining => step_type1_cc(pool, phy, subframe),
        HarqScheme::Type3IncrementalRedundancy => step_type3_ir(pool, phy, subframe),
        HarqScheme::BurstChaseCombining => step_burst_cc(pool, phy, subframe),
    }
}

/// Stop-and-wait step without soft combining: every attempt decodes alone.
pub fn step_type1_nocomb<P: HarqPhy + ?Sized>(
    pool: &mut HarqPool,
    phy: &mut P,
    subframe: u64,
) -> Result<SubframeOutcome> {
    serve(pool, 1, phy, subframe, HarqScheme::Type1NoCombining)
}

/// Stop-and-wait step with chase combining of identical retransmissions.
pub fn step_type1_cc<P: HarqPhy + ?Sized>(
    pool: &mut HarqPool,
    phy: &mut P,
    subframe: u64,
) -> Result<SubframeOutcome> {
    serve(pool, 1, phy, subframe, HarqScheme::Type1ChaseCombining)
}

/// Incremental-redundancy step on the process selected by `harq_index`.
pub fn step_type3_ir<P: HarqPhy + ?Sized>(
    pool: &mut HarqPool,
    phy: &mut P,
    subframe: u64,
) -> Result<SubframeOutcome> {
    let idx = harq_index(subframe, pool.len());
    serve(pool, idx, phy, subframe, HarqScheme::Type3IncrementalRedundancy)
}

fn serve<P: HarqPhy + ?Sized>(
    pool: &mut HarqPool,
    idx: usize,
    phy: &mut P,
    subframe: u64,
    scheme: HarqScheme,
) -> Result<SubframeOutcome> {
    let max_tx = pool.max_transmissions();
    if pool.process_mut(idx).data.is_none() {
        let serial = pool.take_serial();
        let bits = phy.generate(serial);
        pool.process_mut(idx).data = Some(PendingBlock { serial, bits });
    }
    let proc = pool.process_mut(idx);
    proc.tx_count += 1;
    let attempt = proc.tx_count;
    let rv = rv_schedule(scheme, attempt);
    let block = proc.data.as_ref().expect("pending block");
    let serial = block.serial;
    let ctx = TxContext {
        subframe,
        block_serial: serial,
        attempt,
    };
    let llrs = phy.transmit(&block.bits, rv, ctx)?;

    let crc_ok = if scheme == HarqScheme::Type1NoCombining {
        let mut fresh = phy.new_buffer();
        phy.combine(&mut fresh, &llrs, rv)?;
        phy.decode(&fresh)?
    } else {
        let soft = proc.soft.get_or_insert_with(|| phy.new_buffer());
        phy.combine(soft, &llrs, rv)?;
        phy.decode(soft)?
    };

    let dropped = !crc_ok && attempt >= max_tx;
    if crc_ok || dropped {
        proc.reset();
    }
    Ok(SubframeOutcome {
        process: idx,
        block_serial: serial,
        delivered_bits: if crc_ok { phy.tbs() } else { 0 },
        attempts_used: attempt,
        crc_ok,
        acknack_sent: AckNackDecision::from_crc(crc_ok),
        dropped,
        decodes: 1,
    })
}

/// Four back-to-back transmissions of a new block, decoded once from the
/// fully combined buffer. Burst `b` occupies subframes `4b .. 4b + 3`.
pub fn step_burst_cc<P: HarqPhy + ?Sized>(
    pool: &mut HarqPool,
    phy: &mut P,
    burst: u64,
) -> Result<SubframeOutcome> {
    let serial = pool.take_serial();
    let bits = phy.generate(serial);
    let mut soft = phy.new_buffer();
    for attempt in 1..=BURST_LENGTH {
        let ctx = TxContext {
            subframe: burst * BURST_LENGTH as u64 + (attempt - 1) as u64,
            block_serial: serial,
            attempt,
        };
        let llrs = phy.transmit(&bits, 0, ctx)?;
        phy.combine(&mut soft, &llrs, 0)?;
    }
    let crc_ok = phy.decode(&soft)?;
    Ok(SubframeOutcome {
        process: 1,
        block_serial: serial,
        delivered_bits: if crc_ok { phy.tbs() } else { 0 },
        attempts_used: BURST_LENGTH,
        crc_ok,
        acknack_sent: AckNackDecision::from_crc(crc_ok),
        dropped: !crc_ok,
        decodes: 1,
    })
}
