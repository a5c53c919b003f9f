"""
MAC EDCA - EdcaSim

Quatro Access Categories por estação, cada uma um contendor DCF com AIFS,
limites de CW e TXOP próprios. O único acoplamento entre elas é o árbitro
de colisão virtual: quando várias expiram na mesma fronteira de slot,
a de maior prioridade vai ao meio e as demais seguem o caminho de falha.
"""

import logging
from collections import deque
from typing import Deque, Iterable, List, Optional, Sequence, Tuple

from src.core.erros import ErroEstado
from src.core.escalonador import Escalonador, Timestamp
from src.core.mac_dcf import Contendor, EstacaoBase, proximo_cw, rng_contendor
from src.core.meio_fisico import FrameKind, MeioFisico, frame_airtime
from src.core.parametros import AcId, AcParams, DcfParams, EdcaParamSet, PhyParams
from src.core.trafego import Packet, classify

logger = logging.getLogger(__name__)


def aifs_duration(ac, phy: Optional[PhyParams] = None) -> int:
    """AIFS = SIFS + AIFSN * slot, em µs. Aceita AccessCategory, AcParams ou o próprio AIFSN."""
    phy = phy or PhyParams()
    if isinstance(ac, AccessCategory):
        aifsn = ac.params.aifsn
    elif isinstance(ac, AcParams):
        aifsn = ac.aifsn
    else:
        aifsn = int(ac)
    if aifsn < 1:
        raise ValueError(f"aifsn deve ser >= 1 (atual: {aifsn})")
    return phy.sifs_us + aifsn * phy.slot_time_us


def _troca_us(payload_bytes: int, phy: PhyParams) -> int:
    """DATA + SIFS + ACK."""
    return (
        frame_airtime(FrameKind.DATA, payload_bytes, phy)
        + phy.sifs_us + frame_airtime(FrameKind.ACK, 0, phy)
    )


def cabe_no_txop(
    inicio_rajada: Timestamp,
    agora: Timestamp,
    payload_bytes: int,
    txop_limit_us: int,
    phy: PhyParams,
) -> bool:
    """
    True se uma troca dados+ACK iniciada SIFS após 'agora' termina
    dentro do limite contado a partir do início da rajada.
    """
    if txop_limit_us <= 0:
        return False
    fim = agora + phy.sifs_us + _troca_us(payload_bytes, phy)
    return fim - inicio_rajada <= txop_limit_us


def continua_rajada(
    fila: Sequence[Packet],
    inicio_rajada: Timestamp,
    agora: Timestamp,
    txop_limit_us: int,
    phy: PhyParams,
) -> bool:
    """Decide se o quadro à frente da fila sai na mesma rajada, SIFS após 'agora'."""
    if txop_limit_us <= 0 or not fila:
        return False
    return cabe_no_txop(inicio_rajada, agora, fila[0].size_bytes, txop_limit_us, phy)


class AccessCategory(Contendor):
    """Contendor de uma AC: parâmetros da AC, faixa [0, CW] por padrão."""

    def __init__(
        self,
        ac_id: AcId,
        params: AcParams,
        station_id: int,
        kernel: Escalonador,
        phy: PhyParams,
        seed: int,
        retry_limit: int = 7,
        queue_capacity: int = 1000,
        inclusivo: bool = True,
    ):
        self.ac_id = AcId(ac_id)
        self.params = params
        self.codigo = int(self.ac_id)
        super().__init__(
            nome=f"sta{station_id}.{self.ac_id.name}",
            kernel=kernel,
            cw_min=params.cwmin,
            cw_max=params.cwmax,
            retry_limit=retry_limit,
            aifs_us=aifs_duration(params, phy),
            slot_us=phy.slot_time_us,
            rng=rng_contendor(seed, station_id, int(self.ac_id)),
            inclusivo=inclusivo,
            queue_capacity=queue_capacity,
            txop_limit_us=params.txop_limit_us,
        )

    @property
    def prioridade(self) -> int:
        return int(self.ac_id)

    def _atualizar_cw_falha(self) -> int:
        return update_cw_on_failure(self)

    @property
    def quadros_por_acesso(self) -> Optional[float]:
        return self.quadros_ok / self.acessos if self.acessos else None


def update_cw_on_failure(ac: Contendor) -> int:
    """
    Aplica CW_novo = min(((CW_antigo + 1) * 2) - 1, CWmax) e ressorteia
    o backoff. Devolve o novo CW.
    """
    ac.cw = proximo_cw(ac.cw, ac.cw_max)
    ac._sortear()
    return ac.cw


def resolve_internal_collision(
    expiring_acs: Iterable[AccessCategory],
) -> Tuple[AccessCategory, List[AccessCategory]]:
    """
    Vencedora = AC de maior prioridade; as demais são perdedoras.

    Raises:
        ErroEstado: conjunto vazio
    """
    candidatas = sorted(expiring_acs, key=lambda ac: ac.prioridade, reverse=True)
    if not candidatas:
        raise ErroEstado("resolve_internal_collision chamado sem ACs")
    return candidatas[0], candidatas[1:]


def txop_burst(
    ac: Contendor,
    txop_limit_us: Optional[int] = None,
    phy: Optional[PhyParams] = None,
) -> int:
    """
    Quadros que a AC envia em um acesso, supondo que todas as trocas
    têm sucesso: o primeiro sempre sai; os seguintes seguem a mesma
    regra de continua_rajada() usada pela estação.
    """
    phy = phy or PhyParams()
    limite = ac.txop_limit_us if txop_limit_us is None else txop_limit_us
    pendentes: Deque[Packet] = deque(ac.fila)
    if not pendentes:
        return 0
    agora = _troca_us(pendentes.popleft().size_bytes, phy)
    enviados = 1
    while continua_rajada(pendentes, 0, agora, limite, phy):
        agora += phy.sifs_us + _troca_us(pendentes.popleft().size_bytes, phy)
        enviados += 1
    return enviados


class EstacaoEdca(EstacaoBase):
    """Estação QoS com as quatro ACs compartilhando um rádio."""

    def __init__(
        self,
        station_id: int,
        kernel: Escalonador,
        meio: MeioFisico,
        edca: EdcaParamSet,
        seed: int,
        dcf: Optional[DcfParams] = None,
        rts_cts: bool = False,
        inclusivo: bool = True,
    ):
        super().__init__(station_id, kernel, meio, rts_cts)
        self.edca = edca
        dcf = dcf or DcfParams()
        self.acs = {}
        for ac_id in sorted(AcId, reverse=True):
            ac = AccessCategory(
                ac_id, edca[ac_id], station_id, kernel, meio.phy, seed,
                retry_limit=dcf.retry_limit,
                queue_capacity=dcf.queue_capacity,
                inclusivo=inclusivo,
            )
            self.acs[ac_id] = self._registrar(ac)

    def contendor_para(self, pacote: Packet) -> AccessCategory:
        return self.acs[classify(pacote)]

    def ao_expirar(self, ac: AccessCategory) -> None:
        if self.em_troca:
            ac.entrada = self.kernel.now()
            return
        agora = self.kernel.now()
        expirando = [ac]
        for outra in self.contendores:
            if outra is not ac and outra.armado and outra.evento.fire_at == agora:
                outra.desarmar_no_disparo()
                expirando.append(outra)

        com_quadro = []
        for c in expirando:
            if c.fila:
                com_quadro.append(c)
            else:
                c.concluir_post_backoff()
        if not com_quadro:
            return

        vencedora, perdedoras = resolve_internal_collision(com_quadro)
        # a troca começa antes do caminho de falha: um descarte por limite de
        # retransmissões repõe a fila com o canal já ocupado pela vencedora
        self._iniciar_troca(vencedora)
        for perdedora in perdedoras:
            logger.debug("colisão virtual em t=%d: %s perde para %s", agora, perdedora.nome, vencedora.nome)
            perdedora.entrada = agora
            perdedora.falha_virtual()

    def _continua_rajada(self, ac: Contendor) -> bool:
        return continua_rajada(ac.fila, self._rajada_inicio, self.kernel.now(), ac.txop_limit_us, self.phy)


__all__ = [
    'aifs_duration',
    'cabe_no_txop',
    'continua_rajada',
    'AccessCategory',
    'update_cw_on_failure',
    'resolve_internal_collision',
    'txop_burst',
    'EstacaoEdca',
]
