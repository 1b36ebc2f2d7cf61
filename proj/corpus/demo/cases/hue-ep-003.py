import requests

BRIDGE = 'https://hue-bridge.local'
HEADERS = {'hue-application-key': 'demo-app-key'}


def list_lights():
    # Still on the retired v1 prefix.
    url = BRIDGE + '/clip/v1/resource/light'
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
