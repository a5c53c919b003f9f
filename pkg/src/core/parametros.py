"""
Parâmetros de PHY, DCF e EDCA - EdcaSim

Centraliza os parâmetros configuráveis da simulação.
Os valores padrão vêm de 'config/config.yaml' via src.core.config.SIM_CONFIG;
os literais abaixo são apenas o fallback quando a chave não existe.
"""

from dataclasses import dataclass, field, replace, fields
from enum import IntEnum
from typing import Dict, List

from src.core.config import obter


def _int(caminho: str, padrao: int) -> int:
    valor = obter(caminho, padrao)
    return valor if isinstance(valor, int) and not isinstance(valor, bool) else padrao


class AcId(IntEnum):
    """Access Category; o valor inteiro é a prioridade (maior vence)."""
    BK = 0
    BE = 1
    VI = 2
    VO = 3

    @classmethod
    def de_nome(cls, nome: str) -> "AcId":
        try:
            return cls[str(nome).upper()]
        except KeyError:
            raise ValueError(f"Access Category desconhecida: {nome}") from None


# ========================================================================
# PHY
# ========================================================================

@dataclass(frozen=True)
class PhyParams:
    """Durações em µs inteiros, taxas em bit/s, tamanhos em bytes."""
    slot_time_us: int = field(default_factory=lambda: _int('phy.slot_time_us', 9))
    sifs_us: int = field(default_factory=lambda: _int('phy.sifs_us', 10))
    difs_us: int = field(default_factory=lambda: _int('phy.difs_us', 28))
    data_rate_bps: int = field(default_factory=lambda: _int('phy.data_rate_bps', 54_000_000))
    ctrl_rate_bps: int = field(default_factory=lambda: _int('phy.ctrl_rate_bps', 24_000_000))
    plcp_overhead_us: int = field(default_factory=lambda: _int('phy.plcp_overhead_us', 20))
    mac_header_bytes: int = field(default_factory=lambda: _int('phy.mac_header_bytes', 28))
    ack_frame_bytes: int = field(default_factory=lambda: _int('phy.ack_frame_bytes', 14))
    rts_frame_bytes: int = field(default_factory=lambda: _int('phy.rts_frame_bytes', 20))
    cts_frame_bytes: int = field(default_factory=lambda: _int('phy.cts_frame_bytes', 14))

    def validar(self) -> List[str]:
        """Lista de violações de invariantes (vazia se válido)."""
        erros = []
        for f in fields(self):
            valor = getattr(self, f.name)
            if not isinstance(valor, int) or isinstance(valor, bool):
                erros.append(f"{f.name} deve ser inteiro (atual: {valor!r})")
            elif valor <= 0:
                erros.append(f"{f.name} deve ser > 0 (atual: {valor})")
        if not erros and self.difs_us != self.sifs_us + 2 * self.slot_time_us:
            erros.append(
                f"difs_us deve ser sifs_us + 2 * slot_time_us "
                f"({self.sifs_us + 2 * self.slot_time_us}), atual: {self.difs_us}"
            )
        return erros


# ========================================================================
# DCF
# ========================================================================

@dataclass(frozen=True)
class DcfParams:
    cw_min: int = field(default_factory=lambda: _int('dcf.cw_min', 15))
    cw_max: int = field(default_factory=lambda: _int('dcf.cw_max', 1023))
    retry_limit: int = field(default_factory=lambda: _int('dcf.retry_limit', 7))
    queue_capacity: int = field(default_factory=lambda: _int('dcf.queue_capacity', 1000))

    def validar(self) -> List[str]:
        erros = []
        if self.cw_min < 1:
            erros.append(f"cw_min deve ser >= 1 (atual: {self.cw_min})")
        if self.cw_max < self.cw_min:
            erros.append(f"cw_max ({self.cw_max}) deve ser >= cw_min ({self.cw_min})")
        if self.retry_limit < 0:
            erros.append(f"retry_limit deve ser >= 0 (atual: {self.retry_limit})")
        if self.queue_capacity < 1:
            erros.append(f"queue_capacity deve ser >= 1 (atual: {self.queue_capacity})")
        return erros


# ========================================================================
# EDCA
# ========================================================================

_PADROES_AC = {
    AcId.VO: (7, 15, 2),
    AcId.VI: (15, 31, 2),
    AcId.BE: (31, 1023, 7),
    AcId.BK: (31, 1023, 9),
}


@dataclass(frozen=True)
class AcParams:
    cwmin: int
    cwmax: int
    aifsn: int
    txop_limit_us: int = 0  # 0 = um quadro por acesso

    @classmethod
    def padrao(cls, ac: AcId) -> "AcParams":
        cwmin, cwmax, aifsn = _PADROES_AC[ac]
        base = f'edca.{ac.name}'
        return cls(
            cwmin=_int(f'{base}.cwmin', cwmin),
            cwmax=_int(f'{base}.cwmax', cwmax),
            aifsn=_int(f'{base}.aifsn', aifsn),
            txop_limit_us=_int(f'{base}.txop_limit_us', 0),
        )

    def validar(self) -> List[str]:
        erros = []
        if self.cwmin < 1:
            erros.append(f"cwmin deve ser >= 1 (atual: {self.cwmin})")
        if self.cwmax < self.cwmin:
            erros.append(f"cwmax ({self.cwmax}) deve ser >= cwmin ({self.cwmin})")
        if self.aifsn < 1:
            erros.append(f"aifsn deve ser >= 1 (atual: {self.aifsn})")
        if self.txop_limit_us < 0:
            erros.append(f"txop_limit_us deve ser >= 0 (atual: {self.txop_limit_us})")
        return erros


@dataclass(frozen=True)
class EdcaParamSet:
    """Conjunto de parâmetros das quatro ACs de uma estação."""
    vo: AcParams = field(default_factory=lambda: AcParams.padrao(AcId.VO))
    vi: AcParams = field(default_factory=lambda: AcParams.padrao(AcId.VI))
    be: AcParams = field(default_factory=lambda: AcParams.padrao(AcId.BE))
    bk: AcParams = field(default_factory=lambda: AcParams.padrao(AcId.BK))

    def __getitem__(self, ac: AcId) -> AcParams:
        return getattr(self, AcId(ac).name.lower())

    def com(self, ac: AcId, **mudancas) -> "EdcaParamSet":
        """Cópia com parâmetros de uma AC alterados."""
        nome = AcId(ac).name.lower()
        return replace(self, **{nome: replace(getattr(self, nome), **mudancas)})

    def como_dict(self) -> Dict[str, AcParams]:
        return {ac.name: self[ac] for ac in sorted(AcId, reverse=True)}


# ========================================================================
# POLÍTICA DE SORTEIO DO BACKOFF
# ========================================================================

POLITICAS_BACKOFF = ('section', 'exclusive', 'inclusive')


def faixa_inclusiva(politica: str, edca: bool) -> bool:
    """
    True se o sorteio cobre [0, CW]; False se cobre [0, CW-1].

    'section' segue cada mecanismo: DCF exclusivo, EDCA inclusivo.
    """
    if politica == 'section':
        return edca
    if politica == 'inclusive':
        return True
    if politica == 'exclusive':
        return False
    raise ValueError(f"backoff_policy desconhecida: {politica}")


def politica_backoff_padrao() -> str:
    valor = obter('simulacao.backoff_policy', 'section')
    return valor if valor in POLITICAS_BACKOFF else 'section'


def phase_offset_padrao() -> bool:
    return bool(obter('simulacao.phase_offset', True))


# ========================================================================
# EXIBIÇÃO / VALIDAÇÃO
# ========================================================================

def exibir_configuracao() -> str:
    """Texto formatado com os parâmetros padrão em vigor."""
    phy, dcf, edca = PhyParams(), DcfParams(), EdcaParamSet()
    linhas = ["=" * 70, "⚙️  CONFIGURAÇÃO EDCASIM", "=" * 70, "", "📡 PHY:"]
    for f in fields(phy):
        linhas.append(f"   • {f.name}: {getattr(phy, f.name)}")
    linhas.append("")
    linhas.append("📶 DCF:")
    for f in fields(dcf):
        linhas.append(f"   • {f.name}: {getattr(dcf, f.name)}")
    linhas.append("")
    linhas.append("🎚️  EDCA (cwmin / cwmax / aifsn / txop_limit_us):")
    for nome, p in edca.como_dict().items():
        linhas.append(f"   • {nome}: {p.cwmin} / {p.cwmax} / {p.aifsn} / {p.txop_limit_us}")
    linhas.append("")
    linhas.append(f"🎲 backoff_policy: {politica_backoff_padrao()}")
    linhas.append("=" * 70)
    return "\n".join(linhas)


def validar_parametros() -> List[str]:
    """Valida os padrões carregados; retorna a lista de erros."""
    erros = PhyParams().validar() + DcfParams().validar()
    edca = EdcaParamSet()
    for ac in AcId:
        erros.extend(f"{ac.name}: {e}" for e in edca[ac].validar())
    return erros


__all__ = [
    'AcId',
    'PhyParams',
    'DcfParams',
    'AcParams',
    'EdcaParamSet',
    'POLITICAS_BACKOFF',
    'faixa_inclusiva',
    'politica_backoff_padrao',
    'phase_offset_padrao',
    'exibir_configuracao',
    'validar_parametros',
]
